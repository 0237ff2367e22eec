//! Fourth-order photon-photon vertex: two polarization bubbles joined by a
//! Gaussian electron-hole interaction kernel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::{lorentz, PolarizationBubble};
use crate::error::{Error, Photon, Result};
use crate::model::{BandEdgeParams, SshParams};
use crate::numerics::{bz_node, pairwise_sum};
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InteractionKernel {
    pub v0: f64,
    /// Range parameter; the kernel is `v0 exp(-zeta (k - k')^2)`.
    pub zeta: f64,
}

impl Default for InteractionKernel {
    fn default() -> Self {
        Self { v0: 1.0, zeta: 10.0 }
    }
}

impl InteractionKernel {
    pub fn validate(&self) -> Result<()> {
        if !self.v0.is_finite() {
            return Err(Error::InvalidParameter("v0 must be finite".into()));
        }
        if !(self.zeta.is_finite() && self.zeta >= 0.0) {
            return Err(Error::InvalidParameter(format!("zeta must be >= 0, got {}", self.zeta)));
        }
        Ok(())
    }
}

pub fn interaction_kernel(k: f64, k_prime: f64, kern: &InteractionKernel) -> f64 {
    let d = k - k_prime;
    kern.v0 * (-kern.zeta * d * d).exp()
}

/// Direct 2D Brillouin-zone evaluator with the kernel matrix cached.
///
/// The double sum is accumulated as `a V b + b V a` over identical row orders,
/// which makes it exactly symmetric under `omega1 <-> omega2`.
#[derive(Debug, Clone)]
pub struct VertexModel {
    bubble: PolarizationBubble,
    kernel: Vec<f64>,
    eta: f64,
    /// Overall photon-leg normalization; 1 unless the caller sets it.
    pub prefactor: f64,
}

impl VertexModel {
    pub fn new(p: &SshParams, eta: f64, kern: &InteractionKernel, n_k2d: usize) -> Result<Self> {
        kern.validate()?;
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParameter(format!("eta must be > 0, got {eta}")));
        }
        let bubble = PolarizationBubble::new(p, n_k2d)?;
        let n = bubble.len();
        let kernel: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| interaction_kernel(bz_node(idx / n, n), bz_node(idx % n, n), kern))
            .collect();
        Ok(Self {
            bubble,
            kernel,
            eta,
            prefactor: 1.0,
        })
    }

    fn legs(&self, omega: f64) -> Vec<Complex64> {
        self.bubble
            .gaps()
            .iter()
            .zip(self.bubble.weights())
            .map(|(&d, &w)| lorentz(omega - d, self.eta) * w)
            .collect()
    }

    pub fn gamma4(&self, omega1: f64, omega2: f64) -> Complex64 {
        let n = self.bubble.len();
        let a = self.legs(omega1);
        let b = self.legs(omega2);
        let rows: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|j| {
                let v = &self.kernel[j * n..(j + 1) * n];
                let vb = pairwise_sum(n, |l| b[l] * v[l]);
                let va = pairwise_sum(n, |l| a[l] * v[l]);
                a[j] * vb + b[j] * va
            })
            .collect();
        let total = pairwise_sum(n, |j| rows[j]);
        total * (0.5 * self.prefactor / (n as f64 * n as f64))
    }
}

pub fn gamma4_direct(
    omega1: f64,
    omega2: f64,
    p: &SshParams,
    eta: f64,
    kern: &InteractionKernel,
    n_k2d: usize,
) -> Result<Complex64> {
    Ok(VertexModel::new(p, eta, kern, n_k2d)?.gamma4(omega1, omega2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub q_star: f64,
    pub q_star_prime: f64,
    pub above_threshold: (bool, bool),
}

/// Band-edge saddle momenta; fails unless both photons clear the gap.
pub fn saddle_points(omega1: f64, omega2: f64, edge: &BandEdgeParams) -> Result<SaddleSolution> {
    match (edge.saddle_momentum(omega1), edge.saddle_momentum(omega2)) {
        (Some(q1), Some(q2)) => Ok(SaddleSolution {
            q_star: q1,
            q_star_prime: q2,
            above_threshold: (true, true),
        }),
        (None, None) => Err(Error::BelowThreshold(Photon::Both)),
        (None, _) => Err(Error::BelowThreshold(Photon::First)),
        (_, None) => Err(Error::BelowThreshold(Photon::Second)),
    }
}

/// Stationary-phase closed form of the vertex about the band-edge saddles.
pub fn gamma4_stationary(
    omega1: f64,
    omega2: f64,
    eta: f64,
    kern: &InteractionKernel,
    edge: &BandEdgeParams,
) -> Result<Complex64> {
    kern.validate()?;
    if kern.zeta == 0.0 {
        return Err(Error::ZeroRange);
    }
    let s = saddle_points(omega1, omega2, edge)?;
    let a2 = edge.dipole_slope * edge.dipole_slope;
    let qq = s.q_star * s.q_star_prime;
    let dq = s.q_star - s.q_star_prime;
    let amplitude = a2 * a2 * kern.v0 * qq * qq * (-kern.zeta * dq * dq).exp()
        * (2.0 * std::f64::consts::PI / kern.zeta).sqrt();
    let d1 = Complex64::new(omega1 - edge.gap0, eta);
    let d2 = Complex64::new(omega2 - edge.gap0, eta);
    Ok(Complex64::new(amplitude, 0.0) / (d1 * d2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexMethod {
    Direct,
    Stationary,
}

impl VertexMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexMethod::Direct => "direct",
            VertexMethod::Stationary => "stationary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexSample {
    pub omega1: f64,
    pub omega2: f64,
    pub value: Complex64,
    pub method: VertexMethod,
}

pub fn samples_to_csv(samples: &[VertexSample]) -> String {
    let mut t = CsvTable::new(&["omega1", "omega2", "ReG4", "ImG4", "method"]);
    for s in samples {
        t.push(&[
            s.omega1.into(),
            s.omega2.into(),
            s.value.re.into(),
            s.value.im.into(),
            s.method.as_str().into(),
        ]);
    }
    t.into_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::band_edge_params_analytic;

    fn ssh() -> SshParams {
        SshParams::new(1.0, 0.5).unwrap()
    }

    #[test]
    fn kernel_shape() {
        let k = InteractionKernel { v0: 2.0, zeta: 4.0 };
        assert_eq!(interaction_kernel(0.3, 0.3, &k), 2.0);
        assert_eq!(interaction_kernel(0.1, 0.6, &k), interaction_kernel(0.6, 0.1, &k));
        let e = interaction_kernel(0.0, 0.5, &k);
        assert!((e - 2.0 / std::f64::consts::E).abs() < 1e-15);
        let flat = InteractionKernel { v0: 2.0, zeta: 0.0 };
        assert_eq!(interaction_kernel(-3.0, 3.0, &flat), 2.0);
    }

    #[test]
    fn direct_is_exactly_symmetric() {
        let m = VertexModel::new(&ssh(), 1e-2, &InteractionKernel::default(), 128).unwrap();
        assert_eq!(m.gamma4(1.1, 1.7), m.gamma4(1.7, 1.1));
    }

    #[test]
    fn flat_kernel_factorizes() {
        let kern = InteractionKernel { v0: 0.7, zeta: 0.0 };
        let m = VertexModel::new(&ssh(), 1e-2, &kern, 256).unwrap();
        let b = PolarizationBubble::new(&ssh(), 256).unwrap();
        let want = b.eval(1.2, 1e-2) * b.eval(2.1, 1e-2) * 0.7;
        let got = m.gamma4(1.2, 2.1);
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn saddles() {
        let edge = band_edge_params_analytic(&ssh()).unwrap();
        let s = saddle_points(edge.gap0, edge.gap0 + edge.curvature / 2.0, &edge).unwrap();
        assert_eq!(s.q_star, 0.0);
        assert!((s.q_star_prime - 1.0).abs() < 1e-15);
        assert_eq!(saddle_points(0.9, 1.2, &edge), Err(Error::BelowThreshold(Photon::First)));
        assert_eq!(saddle_points(1.2, 0.9, &edge), Err(Error::BelowThreshold(Photon::Second)));
        assert_eq!(saddle_points(0.5, 0.9, &edge), Err(Error::BelowThreshold(Photon::Both)));
    }

    #[test]
    fn stationary_form() {
        let edge = band_edge_params_analytic(&ssh()).unwrap();
        let kern = InteractionKernel { v0: 1.0, zeta: 10.0 };
        let a = gamma4_stationary(1.1, 1.25, 1e-2, &kern, &edge).unwrap();
        assert_eq!(a, gamma4_stationary(1.25, 1.1, 1e-2, &kern, &edge).unwrap());
        let double = InteractionKernel { v0: 2.0, zeta: 10.0 };
        let b = gamma4_stationary(1.1, 1.25, 1e-2, &double, &edge).unwrap();
        assert!((b.norm() / a.norm() - 2.0).abs() < 1e-14);
        let flat = InteractionKernel { v0: 1.0, zeta: 0.0 };
        assert_eq!(gamma4_stationary(1.1, 1.2, 1e-2, &flat, &edge), Err(Error::ZeroRange));
    }
}
