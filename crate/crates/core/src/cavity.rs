//! Linear cavity response: the polarization-bubble photon self-energy, the
//! dressed propagator and its spectral function, and the two-level Hopfield
//! reference model.
//!
//! The self-energy always carries the `g^2` prefactor:
//!
//! ```text
//! Sigma(omega, n) = g^2 (n + 1) (1/2pi) int dk |mu(k)|^2 / (omega - Delta(k) + i eta)
//! ```
//!
//! so `Sigma(omega) = Sigma(omega, 0)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{band_gap, dipole, SshParams};
use crate::numerics::{bz_node, check_bz_points, pairwise_sum, FrequencyGrid};
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityParams {
    /// Bare cavity frequency at `q = 0`.
    pub omega_c: f64,
    /// Dispersion curvature, `omega_c(q) = omega_c + mass_beta q^2`.
    pub mass_beta: f64,
    /// Light-matter coupling.
    pub g: f64,
    /// Lorentzian broadening.
    pub eta: f64,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self {
            omega_c: 1.0,
            mass_beta: 0.5,
            g: 0.05,
            eta: 0.01,
        }
    }
}

impl CavityParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidParameter(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.mass_beta.is_finite() && self.mass_beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass_beta must be >= 0, got {}",
                self.mass_beta
            )));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::InvalidParameter(format!("g must be >= 0, got {}", self.g)));
        }
        if !self.omega_c.is_finite() {
            return Err(Error::InvalidParameter("omega_c must be finite".into()));
        }
        Ok(())
    }

    pub fn dispersion(&self, q: f64) -> f64 {
        self.omega_c + self.mass_beta * q * q
    }

    /// Cavity resonant with the SSH band edge, `omega_c = 2|t1 - t2|`.
    pub fn resonant_with(self, p: &SshParams) -> Self {
        Self {
            omega_c: 2.0 * (p.t1 - p.t2).abs(),
            ..self
        }
    }
}

/// `1 / (x + i eta)` without forming a complex division.
#[inline]
pub(crate) fn lorentz(x: f64, eta: f64) -> Complex64 {
    let d = x * x + eta * eta;
    Complex64::new(x / d, -eta / d)
}

/// `|mu(k)|^2` and `Delta(k)` sampled on the periodic Brillouin-zone grid.
///
/// Evaluates the bubble integrals at unit coupling; every sum is pairwise in a
/// fixed order.
#[derive(Debug, Clone)]
pub struct PolarizationBubble {
    gaps: Vec<f64>,
    weights: Vec<f64>,
}

impl PolarizationBubble {
    pub fn new(p: &SshParams, n_k: usize) -> Result<Self> {
        p.validate()?;
        check_bz_points(n_k)?;
        let mut gaps = Vec::with_capacity(n_k);
        let mut weights = Vec::with_capacity(n_k);
        for j in 0..n_k {
            let k = bz_node(j, n_k);
            let mu = dipole(k, p)?;
            gaps.push(band_gap(k, p));
            weights.push(mu * mu);
        }
        Ok(Self { gaps, weights })
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(1/2pi) int dk |mu|^2 / (omega - Delta + i eta)`.
    pub fn eval(&self, omega: f64, eta: f64) -> Complex64 {
        let n = self.len();
        pairwise_sum(n, |j| lorentz(omega - self.gaps[j], eta) * self.weights[j]) / n as f64
    }

    /// [`Self::eval`] continued to complex frequency `z`.
    pub fn eval_complex(&self, z: Complex64, eta: f64) -> Complex64 {
        let n = self.len();
        let shift = z + Complex64::new(0.0, eta);
        pairwise_sum(n, |j| (shift - self.gaps[j]).inv() * self.weights[j]) / n as f64
    }

    /// [`Self::eval_squared`] continued to complex frequency `z`.
    pub fn eval_squared_complex(&self, z: Complex64, eta: f64) -> Complex64 {
        let n = self.len();
        let shift = z + Complex64::new(0.0, eta);
        pairwise_sum(n, |j| {
            let l = (shift - self.gaps[j]).inv();
            l * l * self.weights[j]
        }) / n as f64
    }

    /// `(1/2pi) int dk |mu|^2 / (omega - Delta + i eta)^2`, i.e. minus the
    /// frequency derivative of [`Self::eval`].
    pub fn eval_squared(&self, omega: f64, eta: f64) -> Complex64 {
        let n = self.len();
        pairwise_sum(n, |j| {
            let l = lorentz(omega - self.gaps[j], eta);
            l * l * self.weights[j]
        }) / n as f64
    }
}

/// SSH chain + cavity with the Brillouin-zone samples cached, for sweeps.
#[derive(Debug, Clone)]
pub struct CavityModel {
    pub ssh: SshParams,
    pub cavity: CavityParams,
    bubble: PolarizationBubble,
}

impl CavityModel {
    pub fn new(ssh: SshParams, cavity: CavityParams, n_k: usize) -> Result<Self> {
        cavity.validate()?;
        let bubble = PolarizationBubble::new(&ssh, n_k)?;
        Ok(Self { ssh, cavity, bubble })
    }

    pub fn bubble(&self) -> &PolarizationBubble {
        &self.bubble
    }

    pub fn self_energy(&self, omega: f64) -> Complex64 {
        let g = self.cavity.g;
        self.bubble.eval(omega, self.cavity.eta) * (g * g)
    }

    pub fn self_energy_n(&self, omega: f64, n: u32) -> Complex64 {
        self.self_energy(omega) * f64::from(n + 1)
    }

    /// `d Sigma(omega, n) / d omega`.
    pub fn self_energy_n_derivative(&self, omega: f64, n: u32) -> Complex64 {
        let g = self.cavity.g;
        -self.bubble.eval_squared(omega, self.cavity.eta) * (g * g * f64::from(n + 1))
    }

    /// Inverse bare propagator `omega - omega_c(q) + i eta`.
    pub fn inverse_bare(&self, omega: f64, q: f64) -> Complex64 {
        Complex64::new(omega - self.cavity.dispersion(q), self.cavity.eta)
    }

    /// Dyson resummation `1 / (G0^-1 - Sigma)` with a precomputed `Sigma(omega)`.
    pub fn propagator_with(&self, omega: f64, q: f64, sigma: Complex64) -> Complex64 {
        (self.inverse_bare(omega, q) - sigma).inv()
    }

    pub fn propagator(&self, omega: f64, q: f64) -> Complex64 {
        self.propagator_with(omega, q, self.self_energy(omega))
    }

    pub fn spectral(&self, omega: f64, q: f64) -> f64 {
        spectral_from_retarded(self.propagator(omega, q))
    }

    pub fn spectral_map(&self, omega_grid: &FrequencyGrid, q_grid: &FrequencyGrid) -> Result<SpectralMap> {
        omega_grid.validate()?;
        q_grid.validate()?;
        let qs = q_grid.values();
        let rows: Vec<Vec<f64>> = (0..omega_grid.count)
            .into_par_iter()
            .map(|i| {
                let w = omega_grid.value(i);
                let sigma = self.self_energy(w);
                qs.iter()
                    .map(|&q| spectral_from_retarded(self.propagator_with(w, q, sigma)))
                    .collect()
            })
            .collect();
        SpectralMap::new(*omega_grid, *q_grid, rows.concat())
    }
}

/// `-(1/pi) Im G`.
pub fn spectral_from_retarded(g: Complex64) -> f64 {
    -g.im / std::f64::consts::PI
}

pub fn photon_self_energy(omega: f64, p: &SshParams, c: &CavityParams, n_k: usize) -> Result<Complex64> {
    Ok(CavityModel::new(*p, *c, n_k)?.self_energy(omega))
}

pub fn photon_self_energy_n(
    omega: f64,
    n: u32,
    p: &SshParams,
    c: &CavityParams,
    n_k: usize,
) -> Result<Complex64> {
    Ok(CavityModel::new(*p, *c, n_k)?.self_energy_n(omega, n))
}

pub fn dressed_propagator(
    omega: f64,
    q: f64,
    p: &SshParams,
    c: &CavityParams,
    n_k: usize,
) -> Result<Complex64> {
    Ok(CavityModel::new(*p, *c, n_k)?.propagator(omega, q))
}

pub fn spectral_function(omega: f64, q: f64, p: &SshParams, c: &CavityParams, n_k: usize) -> Result<f64> {
    Ok(CavityModel::new(*p, *c, n_k)?.spectral(omega, q))
}

pub fn spectral_map(
    omega_grid: &FrequencyGrid,
    q_grid: &FrequencyGrid,
    p: &SshParams,
    c: &CavityParams,
    n_k: usize,
) -> Result<SpectralMap> {
    CavityModel::new(*p, *c, n_k)?.spectral_map(omega_grid, q_grid)
}

/// `A(omega, q)` sampled row-major: omega outer, q inner.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMap {
    pub omega_grid: FrequencyGrid,
    pub q_grid: FrequencyGrid,
    values: Vec<f64>,
}

impl SpectralMap {
    pub fn new(omega_grid: FrequencyGrid, q_grid: FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != omega_grid.count * q_grid.count {
            return Err(Error::GridMismatch);
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonFiniteSample {
                at: omega_grid.value(i / q_grid.count),
            });
        }
        Ok(Self {
            omega_grid,
            q_grid,
            values,
        })
    }

    pub fn get(&self, i_omega: usize, i_q: usize) -> f64 {
        self.values[i_omega * self.q_grid.count + i_q]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `A(omega)` at fixed momentum index.
    pub fn column(&self, i_q: usize) -> Vec<f64> {
        (0..self.omega_grid.count).map(|i| self.get(i, i_q)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut t = CsvTable::new(&["omega", "q", "A"]);
        for i in 0..self.omega_grid.count {
            let w = self.omega_grid.value(i);
            for j in 0..self.q_grid.count {
                t.push(&[w.into(), self.q_grid.value(j).into(), self.get(i, j).into()]);
            }
        }
        t.into_string()
    }
}

/// Eigenvalues of `[[beta q^2 + delta_pi, g], [g, delta_pi]]`, ascending.
pub fn hopfield_branches(q: f64, g_hop: f64, beta: f64, delta_pi: f64) -> (f64, f64) {
    let photon = beta * q * q + delta_pi;
    let mean = 0.5 * (photon + delta_pi);
    let half = 0.5 * (photon - delta_pi);
    let split = (half * half + g_hop * g_hop).sqrt();
    (mean - split, mean + split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ssh() -> SshParams {
        SshParams::new(1.0, 0.5).unwrap()
    }

    #[test]
    fn decoupled_cavity_has_no_self_energy() {
        let c = CavityParams { g: 0.0, ..Default::default() };
        assert_eq!(photon_self_energy(1.3, &ssh(), &c, 256).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bare_resonance() {
        let c = CavityParams {
            g: 0.0,
            eta: 0.02,
            ..Default::default()
        };
        let q = 0.3;
        let w = c.dispersion(q);
        let g = dressed_propagator(w, q, &ssh(), &c, 256).unwrap();
        assert!((g - Complex64::new(0.0, -1.0 / 0.02)).norm() < 1e-12);
        let a = spectral_function(w, q, &ssh(), &c, 256).unwrap();
        assert!((a - 1.0 / (PI * 0.02)).abs() < 1e-10);
        // Half width eta.
        let half = spectral_function(w + 0.02, q, &ssh(), &c, 256).unwrap();
        assert!((half / a - 0.5).abs() < 1e-12);
    }

    #[test]
    fn photon_number_scaling_is_exact() {
        let m = CavityModel::new(ssh(), CavityParams::default(), 512).unwrap();
        for i in 0..40 {
            let w = 0.5 + 0.07 * i as f64;
            let s0 = m.self_energy(w);
            assert_eq!(m.self_energy_n(w, 0), s0);
            assert_eq!(m.self_energy_n(w, 3), s0 * 4.0);
        }
    }

    #[test]
    fn advanced_is_conjugate() {
        let m = CavityModel::new(ssh(), CavityParams::default(), 512).unwrap();
        let g = m.propagator(1.7, 0.2);
        assert!(g.im <= 0.0);
        assert_eq!(g.conj().im, -g.im);
    }

    #[test]
    fn hopfield_limits() {
        let (lo, hi) = hopfield_branches(0.0, 0.05, 0.5, 1.0);
        assert!((hi - lo - 0.1).abs() < 1e-15);
        let (lo, hi) = hopfield_branches(0.4, 0.0, 0.5, 1.0);
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.08).abs() < 1e-15);
    }

    #[test]
    fn small_map_matches_pointwise() {
        let c = CavityParams::default().resonant_with(&ssh());
        let wg = FrequencyGrid::new(0.9, 1.1, 3).unwrap();
        let qg = FrequencyGrid::new(-0.2, 0.2, 3).unwrap();
        let map = spectral_map(&wg, &qg, &ssh(), &c, 512).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let a = spectral_function(wg.value(i), qg.value(j), &ssh(), &c, 512).unwrap();
                assert_eq!(map.get(i, j), a);
            }
            assert_eq!(map.get(i, 0), map.get(i, 2));
        }
        let csv = map.to_csv();
        assert!(csv.starts_with("omega,q,A\n"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn invalid_cavity() {
        let c = CavityParams { eta: 0.0, ..Default::default() };
        assert!(photon_self_energy(1.0, &ssh(), &c, 256).is_err());
    }
}
