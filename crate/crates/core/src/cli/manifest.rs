use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

impl OutputRecord {
    pub fn for_contents(file: &str, contents: &[u8]) -> Self {
        Self {
            file: file.to_owned(),
            sha256: sha256_hex(contents),
            bytes: contents.len(),
        }
    }

    /// Re-hash the file on disk and compare.
    pub fn verify(&self, dir: &Path) -> std::io::Result<bool> {
        let data = std::fs::read(dir.join(&self.file))?;
        Ok(data.len() == self.bytes && sha256_hex(&data) == self.sha256)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// "ok" or "partial".
    pub status: String,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub wall_clock_seconds: f64,
    /// Per-row or per-stage convergence flags, keyed by a short label.
    pub convergence: serde_json::Map<String, serde_json::Value>,
    /// Conventions and derived quantities worth recording next to the data.
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}
