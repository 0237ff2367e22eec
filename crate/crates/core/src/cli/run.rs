use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use super::config::RunConfig;
use super::manifest::{OutputRecord, RunManifest};
use super::{Args, CliError, Command};
use crate::biphoton::{analytic_schmidt, band_edge_vertex, entropy_scan, input_state, schmidt_decompose, EntropyScanSetup};
use crate::cavity::{hopfield_branches, CavityModel};
use crate::dressing::dressing_sample;
use crate::error::Error;
use crate::keldysh::KeldyshModel;
use crate::kerr::{kerr_scan, KerrScanOptions};
use crate::model::{band_edge_params, band_edge_params_analytic, band_energies, band_gap, bloch_phase, dipole, zak_phase, Phase, SshParams};
use crate::numerics::{local_maxima, FrequencyGrid};
use crate::output::{fmt_f64, CsvTable};
use crate::vertex::{gamma4_stationary, VertexMethod, VertexModel, VertexSample};

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
}

/// Everything a command produces before anything touches the disk.
#[derive(Default)]
struct Products {
    files: Vec<(String, String)>,
    convergence: Map<String, Value>,
    metadata: Map<String, Value>,
    partial: bool,
}

impl Products {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_owned(), contents));
    }

    fn meta(&mut self, key: &str, value: Value) {
        self.metadata.insert(key.to_owned(), value);
    }
}

fn compute_err(e: Error) -> CliError {
    CliError::ComputationFailed(e.to_string())
}

pub fn execute(args: &Args) -> Result<RunOutcome, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let config = RunConfig::from_json(&text).map_err(CliError::ConfigInvalid)?;
    let threads = match args.threads {
        Some(0) => return Err(CliError::ConfigInvalid("--threads must be >= 1".into())),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::ComputationFailed(format!("cannot start worker pool: {e}")))?;

    let started = Instant::now();
    if args.verbose {
        eprintln!("sshcav: running {} with {} threads", args.command.name(), pool.current_num_threads());
    }
    let result = pool.install(|| compute(args.command, &config));
    let elapsed = started.elapsed().as_secs_f64();

    let (products, failure) = match result {
        Ok(p) => (p, None),
        Err(e) => (Products::default(), Some(e)),
    };
    let status = match (&failure, products.partial) {
        (Some(_), _) => "failed",
        (None, true) => "partial",
        (None, false) => "ok",
    };

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out.display())))?;
    let mut outputs = Vec::with_capacity(products.files.len());
    for (name, contents) in &products.files {
        write_file(&args.out, name, contents.as_bytes())?;
        outputs.push(OutputRecord::for_contents(name, contents.as_bytes()));
        if args.verbose {
            eprintln!("sshcav: wrote {name}");
        }
    }
    let mut metadata = products.metadata;
    if let Some(e) = &failure {
        metadata.insert("error".into(), Value::String(e.message().to_owned()));
    }
    let manifest = RunManifest {
        tool: "sshcav".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: args.command.name().into(),
        status: status.into(),
        config: serde_json::to_value(&config).expect("config is always serializable"),
        outputs,
        wall_clock_seconds: elapsed,
        convergence: products.convergence,
        metadata,
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest is always serializable");
    write_file(&args.out, "manifest.json", body.as_bytes())?;

    match failure {
        Some(e) => Err(e),
        None if products.partial => Err(CliError::ComputationFailed(format!(
            "{} finished with failed rows; see manifest.json",
            args.command.name()
        ))),
        None => Ok(RunOutcome {
            out_dir: args.out.clone(),
            manifest,
        }),
    }
}

fn write_file(dir: &Path, name: &str, data: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, data).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn compute(command: Command, cfg: &RunConfig) -> Result<Products, CliError> {
    let mut out = Products::default();
    match command {
        Command::Bands => bands(cfg, &mut out),
        Command::Zak => zak(cfg, &mut out),
        Command::SelfEnergy => self_energy(cfg, &mut out),
        Command::Spectrum => spectrum(cfg, &mut out),
        Command::Hopfield => hopfield(cfg, &mut out),
        Command::KerrScan => kerr(cfg, &mut out),
        Command::Vertex => vertex(cfg, &mut out),
        Command::Saddle => saddle(cfg, &mut out),
        Command::Biphoton => biphoton(cfg, &mut out),
        Command::SchmidtScan => schmidt_scan(cfg, &mut out),
        Command::DressedBands => dressed(cfg, &mut out),
        Command::Keldysh => keldysh(cfg, &mut out),
    }
    .map_err(compute_err)?;
    Ok(out)
}

type Step = Result<(), Error>;

fn brillouin_zone(n: usize) -> Result<FrequencyGrid, Error> {
    FrequencyGrid::new(-PI, PI, n)
}

fn phase_label(p: &SshParams) -> &'static str {
    match p.phase() {
        Phase::Trivial => "trivial",
        Phase::Critical => "critical",
        Phase::Topological => "topological",
    }
}

fn bands(cfg: &RunConfig, out: &mut Products) -> Step {
    let p = &cfg.model;
    let mut t = CsvTable::new(&["k", "Delta", "Ev", "Ec", "mu", "theta"]);
    for k in brillouin_zone(cfg.bands.n_points)?.values() {
        let (ev, ec) = band_energies(k, p);
        t.push(&[
            k.into(),
            band_gap(k, p).into(),
            ev.into(),
            ec.into(),
            dipole(k, p)?.into(),
            bloch_phase(k, p)?.into(),
        ]);
    }
    out.file("bands.csv", t.into_string());
    out.meta("gap_at_zone_edge", json!(band_gap(PI, p)));
    Ok(())
}

fn zak(cfg: &RunConfig, out: &mut Products) -> Step {
    let mut models = vec![cfg.model];
    for &r in &cfg.zak.ratios {
        models.push(SshParams::new(cfg.model.t1, r * cfg.model.t1)?);
    }
    let mut t = CsvTable::new(&["t1", "t2", "ratio", "zak_phase", "phase"]);
    for p in &models {
        let z = zak_phase(p, cfg.zak.n_k)?;
        t.push(&[p.t1.into(), p.t2.into(), p.ratio().into(), z.into(), phase_label(p).into()]);
    }
    out.file("zak.csv", t.into_string());
    Ok(())
}

fn self_energy(cfg: &RunConfig, out: &mut Products) -> Step {
    use rayon::prelude::*;
    let m = CavityModel::new(cfg.model, cfg.cavity, cfg.grids.n_k)?;
    let n = cfg.self_energy.photon_number;
    let g = cfg.grids.omega;
    let values: Vec<_> = (0..g.count).into_par_iter().map(|i| m.self_energy_n(g.value(i), n)).collect();
    let mut t = CsvTable::new(&["omega", "ReSigma", "ImSigma"]);
    for (i, s) in values.iter().enumerate() {
        t.push(&[g.value(i).into(), s.re.into(), s.im.into()]);
    }
    out.file("self_energy.csv", t.into_string());
    out.meta("photon_number", json!(n));
    Ok(())
}

fn spectrum(cfg: &RunConfig, out: &mut Products) -> Step {
    let cav = if cfg.spectrum.resonant {
        cfg.cavity.resonant_with(&cfg.model)
    } else {
        cfg.cavity
    };
    let m = CavityModel::new(cfg.model, cav, cfg.grids.n_k)?;
    let map = m.spectral_map(&cfg.grids.omega, &cfg.grids.q)?;
    out.file("spectrum.csv", map.to_csv());
    // Peak positions on the momentum sample closest to q = 0.
    let qs = cfg.grids.q.values();
    let i_q = (0..qs.len())
        .min_by(|&a, &b| qs[a].abs().total_cmp(&qs[b].abs()))
        .expect("grid has points");
    let column = map.column(i_q);
    let peaks: Vec<f64> = local_maxima(&column).into_iter().map(|i| cfg.grids.omega.value(i)).collect();
    out.meta("omega_c", json!(cav.omega_c));
    out.meta("peak_q", json!(qs[i_q]));
    out.meta("peaks", json!(peaks));
    Ok(())
}

fn hopfield(cfg: &RunConfig, out: &mut Products) -> Step {
    let g_hop = cfg.hopfield.g_hop.unwrap_or(cfg.cavity.g);
    let delta_pi = band_gap(PI, &cfg.model);
    let mut t = CsvTable::new(&["q", "lower", "upper"]);
    for q in cfg.grids.q.values() {
        let (lo, hi) = hopfield_branches(q, g_hop, cfg.cavity.mass_beta, delta_pi);
        t.push(&[q.into(), lo.into(), hi.into()]);
    }
    out.file("hopfield.csv", t.into_string());
    out.meta("g_hop", json!(g_hop));
    out.meta("delta_pi", json!(delta_pi));
    Ok(())
}

fn kerr(cfg: &RunConfig, out: &mut Products) -> Step {
    let b = &cfg.kerr_scan;
    let opts = KerrScanOptions {
        n_max: b.n_max,
        n_k: cfg.grids.n_k,
        tol: b.tol,
        max_iter: b.max_iter,
        resonant: b.resonant,
    };
    let rows = kerr_scan(&b.r_values, &cfg.model, &cfg.cavity, &opts)?;
    for row in &rows {
        let flag = match &row.fit {
            Ok(_) => json!(true),
            Err(e) => {
                out.partial = true;
                json!(e.to_string())
            }
        };
        out.convergence.insert(format!("r={}", fmt_f64(row.r)), flag);
    }
    out.file("kerr_scan.csv", crate::kerr::scan_to_csv(&rows));
    out.meta(
        "omega_c_protocol",
        json!(if b.resonant { "re-pinned to 2|t1-t2| per row" } else { "fixed" }),
    );
    out.meta("photon_numbers", json!(format!("0..={}", b.n_max)));
    Ok(())
}

fn vertex(cfg: &RunConfig, out: &mut Products) -> Step {
    let b = &cfg.vertex;
    let eta = cfg.cavity.eta;
    let ws = b.grid.values();
    let edge = band_edge_params(&cfg.model)?;
    let mut samples = Vec::new();
    if b.methods.contains(&VertexMethod::Direct) {
        let mut m = VertexModel::new(&cfg.model, eta, &cfg.kernel, cfg.grids.n_k2d)?;
        m.prefactor = b.prefactor;
        for &w1 in &ws {
            for &w2 in &ws {
                samples.push(VertexSample {
                    omega1: w1,
                    omega2: w2,
                    value: m.gamma4(w1, w2),
                    method: VertexMethod::Direct,
                });
            }
        }
    }
    let mut skipped = 0usize;
    if b.methods.contains(&VertexMethod::Stationary) {
        for &w1 in &ws {
            for &w2 in &ws {
                match gamma4_stationary(w1, w2, eta, &cfg.kernel, &edge) {
                    Ok(value) => samples.push(VertexSample {
                        omega1: w1,
                        omega2: w2,
                        value,
                        method: VertexMethod::Stationary,
                    }),
                    Err(Error::BelowThreshold(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    out.file("vertex.csv", crate::vertex::samples_to_csv(&samples));
    out.meta("prefactor", json!(b.prefactor));
    out.meta("stationary_below_threshold_skipped", json!(skipped));
    out.meta("gap0", json!(edge.gap0));
    Ok(())
}

fn saddle(cfg: &RunConfig, out: &mut Products) -> Step {
    let edge = if cfg.saddle.analytic {
        band_edge_params_analytic(&cfg.model)?
    } else {
        band_edge_params(&cfg.model)?
    };
    let mut t = CsvTable::new(&["omega", "q_star", "above_threshold"]);
    for w in cfg.grids.omega.values() {
        let q = edge.saddle_momentum(w);
        t.push(&[w.into(), q.unwrap_or(f64::NAN).into(), q.is_some().into()]);
    }
    out.file("saddle.csv", t.into_string());
    out.meta("gap0", json!(edge.gap0));
    out.meta("curvature", json!(edge.curvature));
    out.meta("dipole_slope", json!(edge.dipole_slope));
    Ok(())
}

fn biphoton(cfg: &RunConfig, out: &mut Products) -> Step {
    let b = &cfg.biphoton;
    let grid = b.grid()?;
    let edge = band_edge_params(&cfg.model)?;
    let input = input_state(&grid, b.omega0, b.sigma)?;
    let output = crate::biphoton::apply_vertex_fn(&input, band_edge_vertex(&edge, cfg.kernel.v0, b.zeta))?;
    let s_in = schmidt_decompose(&input)?;
    let s_out = schmidt_decompose(&output)?;
    let analytic = if b.zeta > 0.0 {
        Some(analytic_schmidt(b.zeta, s_out.coefficients.len().saturating_sub(1))?)
    } else {
        None
    };
    let mut t = CsvTable::new(&["n", "lambda_in", "lambda_out", "lambda_analytic_normalized"]);
    for n in 0..s_out.coefficients.len() {
        let a = analytic.as_ref().map_or(f64::NAN, |a| a.normalized[n]);
        t.push(&[n.into(), s_in.lambda(n).into(), s_out.lambda(n).into(), a.into()]);
    }
    out.file("jsi_in.csv", input.intensity_csv());
    out.file("jsi_out.csv", output.intensity_csv());
    out.file("schmidt.csv", t.into_string());
    out.meta("entropy_in_nats", json!(s_in.entropy));
    out.meta("entropy_out_nats", json!(s_out.entropy));
    out.meta("entropy_out_bits", json!(s_out.entropy_bits()));
    out.meta("kernel_coordinates", json!("q*(omega), zero below threshold"));
    Ok(())
}

fn schmidt_scan(cfg: &RunConfig, out: &mut Products) -> Step {
    let b = &cfg.schmidt_scan;
    let setup = EntropyScanSetup {
        grid: FrequencyGrid::new(b.omega0 - 4.0 * b.sigma, b.omega0 + 4.0 * b.sigma, b.count)?,
        omega0: b.omega0,
        sigma: b.sigma,
        v0: cfg.kernel.v0,
    };
    let edge = band_edge_params(&cfg.model)?;
    let rows = entropy_scan(&b.zetas, &setup, &edge)?;
    for row in &rows {
        if let Err(e) = &row.spectrum {
            out.partial = true;
            out.convergence.insert(format!("zeta={}", fmt_f64(row.zeta)), json!(e.to_string()));
        }
    }
    out.file("schmidt_scan.csv", crate::biphoton::scan_to_csv(&rows));
    out.meta("geometric_fit", json!("log-linear over lambda0..lambda3"));
    Ok(())
}

fn dressed(cfg: &RunConfig, out: &mut Products) -> Step {
    let ks = brillouin_zone(cfg.dressed_bands.n_points)?.values();
    let mut samples = Vec::with_capacity(ks.len() * cfg.dressed_bands.omegas.len());
    for &w in &cfg.dressed_bands.omegas {
        for &k in &ks {
            samples.push(dressing_sample(k, w, &cfg.model, &cfg.cavity));
        }
    }
    out.file("dressed_bands.csv", crate::dressing::samples_to_csv(&samples));
    out.meta("dipole_momentum_dependence", json!("mu(k, q) = mu(k)"));
    Ok(())
}

fn keldysh(cfg: &RunConfig, out: &mut Products) -> Step {
    let m = KeldyshModel::new(CavityModel::new(cfg.model, cfg.cavity, cfg.grids.n_k)?, cfg.thermal)?;
    let samples = m.sweep(&cfg.grids.omega, cfg.keldysh.q)?;
    out.file("keldysh.csv", crate::keldysh::samples_to_csv(&samples));
    out.meta("occupation_sign", json!("n = (G^K / (-2i Im G^R) - 1) / 2"));
    Ok(())
}
