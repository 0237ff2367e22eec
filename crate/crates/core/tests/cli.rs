use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

const BIN: &str = env!("CARGO_BIN_EXE_sshcav");

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(BIN)
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

fn presets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

#[test]
fn malformed_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for body in ["{ not json", r#"{"model": {"t1": 1.0, "t3": 2.0}}"#, r#"{"colour": 1}"#] {
        let cfg = write_config(dir.path(), body);
        let out = dir.path().join("out");
        let o = run("bands", &cfg, &out, &[]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(!out.exists());
        let err: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(err["exit_code"], 2);
    }
}

#[test]
fn invalid_thread_count_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{}");
    let out = dir.path().join("out");
    assert_eq!(run("bands", &cfg, &out, &["--threads", "0"]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("bands", &dir.path().join("absent.json"), &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn failed_computation_leaves_a_failed_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grids": {"omega": {"start": -1.0, "stop": 1.0, "count": 11}}, "thermal": {"temperature": 1.0}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(run("keldysh", &cfg, &out, &[]).status.code(), Some(3));
    assert_eq!(manifest(&out)["status"], "failed");
}

#[test]
fn zak_run_reports_trivial_phase_and_valid_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"zak": {"ratios": [0.5], "n_k": 512}}"#);
    let out = dir.path().join("out");
    let o = run("zak", &cfg, &out, &["--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(out.join("zak.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "zak_phase").unwrap();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(row[col].parse::<f64>().unwrap().abs() < 1e-10);

    let m = manifest(&out);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["command"], "zak");
    let outputs = m["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for rec in outputs {
        let bytes = std::fs::read(out.join(rec["file"].as_str().unwrap())).unwrap();
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(rec["sha256"].as_str().unwrap(), digest);
        assert_eq!(rec["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grids": {"n_k": 512, "omega": {"start": 0.8, "stop": 1.6, "count": 24}, "q": {"start": -0.5, "stop": 0.5, "count": 5}}}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run("spectrum", &cfg, &a, &["--threads", "1"]).status.success());
    assert!(run("spectrum", &cfg, &b, &["--threads", "4"]).status.success());
    assert_eq!(std::fs::read(a.join("spectrum.csv")).unwrap(), std::fs::read(b.join("spectrum.csv")).unwrap());
}

#[test]
fn presets_parse() {
    for entry in std::fs::read_dir(presets()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let cfg = sshcav::cli::RunConfig::from_json(&text);
        assert!(cfg.is_ok(), "{}: {:?}", path.display(), cfg.err());
    }
}
