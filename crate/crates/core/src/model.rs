//! SSH chain electronic structure: bands, interband current matrix element,
//! Bloch phase, Zak phase and the band-edge expansion at `k = pi`.
//!
//! Energies are in units of `t1` unless the caller chooses otherwise. The gap
//! `Delta(k) = 2|h(k)|` with `h(k) = t1 + t2 exp(-ik)` is the energy of an
//! interband electron-hole pair, so the bands are `+/- Delta(k) / 2`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps below this are treated as closed.
pub const GAPLESS_FLOOR: f64 = 1e-12;

/// `|r - 1|` below this counts as the critical point.
pub const CRITICAL_TOL: f64 = 1e-6;

/// Finite-difference step for the band-edge expansion.
pub const BAND_EDGE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SshParams {
    pub t1: f64,
    pub t2: f64,
}

impl Default for SshParams {
    fn default() -> Self {
        Self { t1: 1.0, t2: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Trivial,
    Critical,
    Topological,
}

impl SshParams {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        let p = Self { t1, t2 };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `t1 = 1` and `t2 = ratio`.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        Self::new(1.0, ratio)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1.is_finite() && self.t1 > 0.0) {
            return Err(Error::InvalidParameter(format!("t1 must be > 0, got {}", self.t1)));
        }
        if !(self.t2.is_finite() && self.t2 >= 0.0) {
            return Err(Error::InvalidParameter(format!("t2 must be >= 0, got {}", self.t2)));
        }
        Ok(())
    }

    pub fn ratio(&self) -> f64 {
        self.t2 / self.t1
    }

    pub fn phase(&self) -> Phase {
        let r = self.ratio();
        if (r - 1.0).abs() < CRITICAL_TOL {
            Phase::Critical
        } else if r < 1.0 {
            Phase::Trivial
        } else {
            Phase::Topological
        }
    }

    fn ensure_gapped(&self) -> Result<()> {
        if self.phase() == Phase::Critical {
            Err(Error::CriticalPoint { ratio: self.ratio() })
        } else {
            Ok(())
        }
    }

    /// Off-diagonal Bloch element `h(k) = t1 + t2 exp(-ik)`.
    pub fn h(&self, k: f64) -> Complex64 {
        Complex64::new(self.t1 + self.t2 * k.cos(), -self.t2 * k.sin())
    }

    /// Largest interband energy, attained at `k = 0`.
    pub fn max_gap(&self) -> f64 {
        2.0 * (self.t1 + self.t2)
    }
}

/// Band-edge expansion `Delta(pi + q) ~ gap0 + curvature q^2 / 2`, `|mu| ~ dipole_slope |q|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEdgeParams {
    pub gap0: f64,
    pub curvature: f64,
    pub dipole_slope: f64,
}

impl BandEdgeParams {
    /// Saddle momentum `sqrt(2 (omega - gap0) / curvature)`, or `None` below threshold.
    pub fn saddle_momentum(&self, omega: f64) -> Option<f64> {
        let excess = omega - self.gap0;
        if excess < 0.0 {
            None
        } else {
            Some((2.0 * excess / self.curvature).sqrt())
        }
    }
}

pub fn band_gap(k: f64, p: &SshParams) -> f64 {
    let t1 = p.t1;
    let t2 = p.t2;
    2.0 * (t1 * t1 + t2 * t2 + 2.0 * t1 * t2 * k.cos()).max(0.0).sqrt()
}

/// `(valence, conduction) = (-Delta/2, +Delta/2)`.
pub fn band_energies(k: f64, p: &SshParams) -> (f64, f64) {
    let half = 0.5 * band_gap(k, p);
    (-half, half)
}

/// Interband current matrix element `t1 t2 sin k / Delta(k)`.
pub fn dipole(k: f64, p: &SshParams) -> Result<f64> {
    let gap = band_gap(k, p);
    if gap < GAPLESS_FLOOR {
        return Err(Error::GaplessPoint { k, gap });
    }
    Ok(p.t1 * p.t2 * k.sin() / gap)
}

/// `arg h(k)` in `(-pi, pi]`.
pub fn bloch_phase(k: f64, p: &SshParams) -> Result<f64> {
    let h = p.h(k);
    if h.norm() < GAPLESS_FLOOR {
        return Err(Error::GaplessPoint {
            k,
            gap: 2.0 * h.norm(),
        });
    }
    let theta = h.im.atan2(h.re);
    Ok(if theta <= -PI { PI } else { theta })
}

/// Bloch phase on the grid `k_j = -pi + 2 pi j / n_k`, `j = 0..=n_k`, unwrapped
/// so that consecutive samples differ by less than `pi`.
pub fn bloch_phase_unwrapped(p: &SshParams, n_k: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_k + 1);
    let mut prev: Option<f64> = None;
    for j in 0..=n_k {
        let k = -PI + TAU * j as f64 / n_k as f64;
        let mut theta = bloch_phase(k, p)?;
        if let Some(last) = prev {
            theta += TAU * ((last - theta) / TAU).round();
        }
        out.push(theta);
        prev = Some(theta);
    }
    Ok(out)
}

/// Valence Bloch spinor `(-exp(-i theta), 1) / sqrt 2`.
fn valence_state(theta: f64) -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [-Complex64::from_polar(s, -theta), Complex64::new(s, 0.0)]
}

/// Zak phase of the valence band from a discrete Wilson loop over `n_k` cells,
/// reported in `[0, 2 pi)`.
pub fn zak_phase(p: &SshParams, n_k: usize) -> Result<f64> {
    if n_k < 64 {
        return Err(Error::InvalidParameter(format!(
            "Zak phase needs at least 64 k-points, got {n_k}"
        )));
    }
    p.ensure_gapped()?;
    let states = (0..n_k)
        .map(|j| bloch_phase(-PI + TAU * j as f64 / n_k as f64, p).map(valence_state))
        .collect::<Result<Vec<_>>>()?;

    let mut loop_product = Complex64::new(1.0, 0.0);
    for j in 0..n_k {
        let a = &states[j];
        let b = &states[(j + 1) % n_k];
        let overlap = a[0].conj() * b[0] + a[1].conj() * b[1];
        loop_product *= overlap;
        loop_product /= loop_product.norm();
    }
    let phase = (-loop_product.arg()).rem_euclid(TAU);
    Ok(if TAU - phase < 1e-12 { 0.0 } else { phase })
}

pub fn band_edge_params(p: &SshParams) -> Result<BandEdgeParams> {
    p.ensure_gapped()?;
    let h = BAND_EDGE_STEP;
    let gap0 = 2.0 * (p.t1 - p.t2).abs();
    let curvature = (band_gap(PI + h, p) - 2.0 * band_gap(PI, p) + band_gap(PI - h, p)) / (h * h);
    let dipole_slope = ((dipole(PI + h, p)? - dipole(PI - h, p)?) / (2.0 * h)).abs();
    Ok(BandEdgeParams {
        gap0,
        curvature,
        dipole_slope,
    })
}

/// Closed-form band-edge parameters: `curvature = 2 t1 t2 / |t1 - t2|`,
/// `dipole_slope = t1 t2 / gap0`.
pub fn band_edge_params_analytic(p: &SshParams) -> Result<BandEdgeParams> {
    p.ensure_gapped()?;
    let d = (p.t1 - p.t2).abs();
    Ok(BandEdgeParams {
        gap0: 2.0 * d,
        curvature: 2.0 * p.t1 * p.t2 / d,
        dipole_slope: p.t1 * p.t2 / (2.0 * d),
    })
}
