//! Batch front-end: one JSON config drives one command, which writes CSV
//! datasets plus a `manifest.json` into the output directory.
//!
//! Exit codes: 0 success, 2 invalid config (nothing written), 3 computation
//! failure (partial outputs flagged in the manifest), 4 I/O failure.

mod config;
mod manifest;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::RunConfig;
pub use manifest::{OutputRecord, RunManifest};
pub use run::{execute, RunOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bands,
    Zak,
    SelfEnergy,
    Spectrum,
    Hopfield,
    KerrScan,
    Vertex,
    Saddle,
    Biphoton,
    SchmidtScan,
    DressedBands,
    Keldysh,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Zak => "zak",
            Command::SelfEnergy => "self-energy",
            Command::Spectrum => "spectrum",
            Command::Hopfield => "hopfield",
            Command::KerrScan => "kerr-scan",
            Command::Vertex => "vertex",
            Command::Saddle => "saddle",
            Command::Biphoton => "biphoton",
            Command::SchmidtScan => "schmidt-scan",
            Command::DressedBands => "dressed-bands",
            Command::Keldysh => "keldysh",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sshcav", version, about = "Cavity-dressed SSH chain datasets")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; affects speed only.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    ConfigInvalid(String),
    ComputationFailed(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => 2,
            CliError::ComputationFailed(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ConfigInvalid(_) => "ConfigInvalid",
            CliError::ComputationFailed(_) => "ComputationFailed",
            CliError::Io(_) => "IoError",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::ConfigInvalid(m) | CliError::ComputationFailed(m) | CliError::Io(m) => m,
        }
    }

    /// One-line JSON error record for stderr.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.message(),
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

/// Parse `argv`, run, and return the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&args) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
