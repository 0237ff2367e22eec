use num_complex::Complex64;
use thiserror::Error;

/// Which photon of a pair fell below the pair-creation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    First,
    Second,
    Both,
}

impl std::fmt::Display for Photon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Photon::First => write!(f, "omega1"),
            Photon::Second => write!(f, "omega2"),
            Photon::Both => write!(f, "omega1 and omega2"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("band gap closes at k = {k} (gap {gap:e})")]
    GaplessPoint { k: f64, gap: f64 },

    #[error("hopping ratio r = {ratio} is too close to the critical point r = 1")]
    CriticalPoint { ratio: f64 },

    #[error("integrand returned a non-finite value at x = {at}")]
    NonFiniteSample { at: f64 },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("Newton iteration did not converge after {iterations} steps (last iterate {last}, residual {residual:e})")]
    NoConvergence {
        last: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("least-squares design matrix is degenerate: {0}")]
    DegenerateDesign(String),

    #[error("pole at {pole} lies on the integration boundary [{a}, {b}]")]
    PoleOnBoundary { pole: f64, a: f64, b: f64 },

    #[error("{0} below the pair-creation threshold")]
    BelowThreshold(Photon),

    #[error("interaction range zeta = 0 makes the stationary-phase prefactor diverge")]
    ZeroRange,

    #[error("frequency grid [{start}, {stop}] does not cover omega0 +/- 4 sigma = [{need_lo}, {need_hi}]")]
    GridTooNarrow {
        start: f64,
        stop: f64,
        need_lo: f64,
        need_hi: f64,
    },

    #[error("state amplitude vanishes identically")]
    ZeroNorm,

    #[error("frequency grids do not match")]
    GridMismatch,

    #[error("Bose occupation requires omega > 0, got {0}")]
    NonPositiveFrequency(f64),

    #[error("retarded spectral weight vanishes at omega = {0}")]
    ZeroSpectralWeight(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
