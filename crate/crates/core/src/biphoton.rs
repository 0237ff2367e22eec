//! Two-photon spectral states, the vertex-scattered output state and its
//! Schmidt (singular-value) decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::BandEdgeParams;
use crate::numerics::{linear_fit, svd_singular_values_complex, FrequencyGrid};
use crate::output::{fmt_f64, CsvTable};

/// Joint spectral amplitude `psi(omega1, omega2)` on a shared square grid,
/// row index `omega1`, column index `omega2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    grid: FrequencyGrid,
    amplitude: DMatrix<Complex64>,
    normalized: bool,
}

impl BiphotonState {
    pub fn new(grid: FrequencyGrid, amplitude: DMatrix<Complex64>) -> Result<Self> {
        grid.validate()?;
        if amplitude.nrows() != grid.count || amplitude.ncols() != grid.count {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid,
            amplitude,
            normalized: false,
        })
    }

    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        grid.validate()?;
        let w = grid.values();
        Self::new(grid, DMatrix::from_fn(grid.count, grid.count, |i, j| f(w[i], w[j])))
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitude(&self) -> &DMatrix<Complex64> {
        &self.amplitude
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `sum |psi|^2 d omega^2`.
    pub fn norm_squared(&self) -> f64 {
        let dw = self.grid.spacing();
        self.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * dw * dw
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n2 = self.norm_squared();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        self.amplitude /= Complex64::new(n2.sqrt(), 0.0);
        self.normalized = true;
        Ok(self)
    }

    /// Exchange the two photons.
    pub fn swapped(&self) -> Self {
        Self {
            amplitude: self.amplitude.transpose(),
            ..self.clone()
        }
    }

    /// Joint spectral intensity `|psi|^2` as a CSV matrix.
    pub fn intensity_csv(&self) -> String {
        let g = &self.grid;
        let mut out = format!("# omega1 rows, omega2 columns: start={},stop={},count={}\n", fmt_f64(g.start), fmt_f64(g.stop), g.count);
        for i in 0..g.count {
            let row: Vec<String> = (0..g.count)
                .map(|j| fmt_f64(self.amplitude[(i, j)].norm_sqr()))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Separable Gaussian pair `phi(omega1) phi(omega2)`, normalized, with
/// `phi(omega) = exp(-(omega - omega0)^2 / (2 sigma^2))`.
pub fn input_state(grid: &FrequencyGrid, omega0: f64, sigma: f64) -> Result<BiphotonState> {
    grid.validate()?;
    if !(sigma.is_finite() && sigma > 0.0) || !omega0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "input state needs finite omega0 and sigma > 0, got ({omega0}, {sigma})"
        )));
    }
    let need_lo = omega0 - 4.0 * sigma;
    let need_hi = omega0 + 4.0 * sigma;
    let slack = 1e-12 * (need_hi - need_lo);
    if grid.start > need_lo + slack || grid.stop < need_hi - slack {
        return Err(Error::GridTooNarrow {
            start: grid.start,
            stop: grid.stop,
            need_lo,
            need_hi,
        });
    }
    let phi: Vec<f64> = grid
        .values()
        .iter()
        .map(|w| (-(w - omega0).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let amp = DMatrix::from_fn(grid.count, grid.count, |i, j| Complex64::new(phi[i] * phi[j], 0.0));
    BiphotonState::new(*grid, amp)?.normalize()
}

/// Multiply by vertex samples on the same grid and renormalize.
pub fn apply_vertex(state: &BiphotonState, vertex: &DMatrix<Complex64>) -> Result<BiphotonState> {
    if vertex.shape() != state.amplitude.shape() {
        return Err(Error::GridMismatch);
    }
    let amp = state.amplitude.component_mul(vertex);
    BiphotonState::new(state.grid, amp)?.normalize()
}

/// [`apply_vertex`] with the vertex evaluated pointwise (rows in parallel).
pub fn apply_vertex_fn<F>(state: &BiphotonState, vertex: F) -> Result<BiphotonState>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let w = state.grid.values();
    let n = w.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| w.iter().map(|&w2| vertex(w[i], w2)).collect())
        .collect();
    let samples = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    apply_vertex(state, &samples)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// `lambda_n`, nonincreasing, summing to 1.
    pub coefficients: Vec<f64>,
    /// Entanglement entropy in nats.
    pub entropy: f64,
}

impl SchmidtSpectrum {
    pub fn from_singular_values(sv: &[f64]) -> Result<Self> {
        let total: f64 = sv.iter().map(|s| s * s).sum();
        if total <= 0.0 || total.is_nan() {
            return Err(Error::ZeroNorm);
        }
        let coefficients: Vec<f64> = sv.iter().map(|s| s * s / total).collect();
        let entropy = coefficients
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.ln())
            .sum::<f64>()
            .max(0.0);
        Ok(Self {
            coefficients,
            entropy,
        })
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy / std::f64::consts::LN_2
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    /// Log-linear fit of the leading `count` coefficients: `(ratio, R^2)`.
    /// `None` when any of them vanishes.
    pub fn geometric_fit(&self, count: usize) -> Option<(f64, f64)> {
        let lead: Vec<f64> = (0..count).map(|n| self.lambda(n)).collect();
        if lead.iter().any(|&l| l <= 0.0 || l.is_nan()) {
            return None;
        }
        let xs: Vec<f64> = (0..count).map(|n| n as f64).collect();
        let ys: Vec<f64> = lead.iter().map(|l| l.ln()).collect();
        linear_fit(&xs, &ys).ok().map(|f| (f.slope.exp(), f.r_squared))
    }
}

/// Singular values of `psi * d omega` (the grid measure absorbed on both legs).
pub fn schmidt_decompose(state: &BiphotonState) -> Result<SchmidtSpectrum> {
    let dw = state.grid.spacing();
    let m = &state.amplitude * Complex64::new(dw, 0.0);
    SchmidtSpectrum::from_singular_values(&svd_singular_values_complex(&m)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSchmidt {
    /// `lambda_0 x^n` with the closed-form (unnormalized) `lambda_0`.
    pub raw: Vec<f64>,
    /// `(1 - x) x^n`.
    pub normalized: Vec<f64>,
}

/// Geometric Schmidt spectrum with ratio `x = zeta / (1 + zeta)`.
pub fn analytic_schmidt(zeta: f64, n_max: usize) -> Result<AnalyticSchmidt> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidParameter(format!("zeta must be > 0, got {zeta}")));
    }
    let x = zeta / (1.0 + zeta);
    let s = (1.0 + zeta).powi(2);
    let lambda0 = (2.0 * zeta * s / (std::f64::consts::PI * (s + zeta * zeta))).sqrt();
    let raw = (0..=n_max).map(|n| lambda0 * x.powi(n as i32)).collect();
    let normalized = (0..=n_max).map(|n| (1.0 - x) * x.powi(n as i32)).collect();
    Ok(AnalyticSchmidt { raw, normalized })
}

/// Band-edge Gaussian vertex `v0 exp(-zeta (q*(omega1) - q*(omega2))^2)` with
/// `q* = 0` below threshold.
pub fn band_edge_vertex(edge: &BandEdgeParams, v0: f64, zeta: f64) -> impl Fn(f64, f64) -> Complex64 + Sync + '_ {
    move |w1, w2| {
        let q1 = edge.saddle_momentum(w1).unwrap_or(0.0);
        let q2 = edge.saddle_momentum(w2).unwrap_or(0.0);
        let d = q1 - q2;
        Complex64::new(v0 * (-zeta * d * d).exp(), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub zeta: f64,
    pub spectrum: Result<SchmidtSpectrum>,
}

impl EntropyRow {
    pub fn geometric_fit(&self) -> Option<(f64, f64)> {
        self.spectrum.as_ref().ok().and_then(|s| s.geometric_fit(4))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyScanSetup {
    pub grid: FrequencyGrid,
    pub omega0: f64,
    pub sigma: f64,
    pub v0: f64,
}

/// Entanglement entropy of the scattered pair for each `zeta`, in input order.
pub fn entropy_scan(zetas: &[f64], setup: &EntropyScanSetup, edge: &BandEdgeParams) -> Result<Vec<EntropyRow>> {
    if zetas.iter().any(|z| !(z.is_finite() && *z >= 0.0)) {
        return Err(Error::InvalidParameter("zeta values must be finite and >= 0".into()));
    }
    let input = input_state(&setup.grid, setup.omega0, setup.sigma)?;
    Ok(zetas
        .par_iter()
        .map(|&zeta| EntropyRow {
            zeta,
            spectrum: apply_vertex_fn(&input, band_edge_vertex(edge, setup.v0, zeta))
                .and_then(|out| schmidt_decompose(&out)),
        })
        .collect())
}

pub fn scan_to_csv(rows: &[EntropyRow]) -> String {
    let mut t = CsvTable::new(&[
        "zeta", "S_nats", "S_bits", "lambda0", "lambda1", "lambda2", "lambda3", "ratio_fit", "fit_r2",
    ]);
    for row in rows {
        let (s, l) = match &row.spectrum {
            Ok(sp) => (
                (sp.entropy, sp.entropy_bits()),
                [sp.lambda(0), sp.lambda(1), sp.lambda(2), sp.lambda(3)],
            ),
            Err(_) => ((f64::NAN, f64::NAN), [f64::NAN; 4]),
        };
        let (ratio, r2) = row.geometric_fit().unwrap_or((f64::NAN, f64::NAN));
        t.push(&[
            row.zeta.into(),
            s.0.into(),
            s.1.into(),
            l[0].into(),
            l[1].into(),
            l[2].into(),
            l[3].into(),
            ratio.into(),
            r2.into(),
        ]);
    }
    t.into_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{band_edge_params_analytic, SshParams};

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(0.6, 1.4, n).unwrap()
    }

    #[test]
    fn input_is_separable_and_normalized() {
        let s = input_state(&grid(64), 1.0, 0.1).unwrap();
        assert!((s.norm_squared() - 1.0).abs() < 1e-12);
        assert_eq!(s.amplitude()[(3, 10)], s.amplitude()[(10, 3)]);
        let sp = schmidt_decompose(&s).unwrap();
        assert!(sp.entropy < 1e-10);
        assert!((sp.coefficients[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let g = FrequencyGrid::new(0.7, 1.4, 16).unwrap();
        assert!(matches!(input_state(&g, 1.0, 0.1), Err(Error::GridTooNarrow { .. })));
    }

    #[test]
    fn bell_like_pair_has_ln2() {
        let g = FrequencyGrid::new(0.0, 1.0, 4).unwrap();
        let mut amp = DMatrix::zeros(4, 4);
        amp[(0, 1)] = Complex64::new(1.0, 0.0);
        amp[(1, 0)] = Complex64::new(1.0, 0.0);
        let s = BiphotonState::new(g, amp).unwrap().normalize().unwrap();
        let sp = schmidt_decompose(&s).unwrap();
        assert!((sp.entropy - 2f64.ln()).abs() < 1e-12);
        assert!((sp.entropy_bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_and_separable_vertices_keep_entropy() {
        let s = input_state(&grid(48), 1.0, 0.1).unwrap();
        let flat = apply_vertex_fn(&s, |_, _| Complex64::new(3.0, 0.0)).unwrap();
        assert!((flat.amplitude() - s.amplitude()).norm() < 1e-12);
        let sep = apply_vertex_fn(&s, |a, b| Complex64::new(a * a, 0.0) * Complex64::from_polar(1.0, b)).unwrap();
        assert!(schmidt_decompose(&sep).unwrap().entropy < 1e-10);
        let zero = apply_vertex_fn(&s, |_, _| Complex64::new(0.0, 0.0));
        assert_eq!(zero, Err(Error::ZeroNorm));
    }

    #[test]
    fn analytic_ratio() {
        let a = analytic_schmidt(1.0, 5).unwrap();
        for n in 0..5 {
            assert!((a.raw[n + 1] / a.raw[n] - 0.5).abs() < 1e-15);
        }
        let tiny = analytic_schmidt(1e-12, 3).unwrap();
        assert!((tiny.normalized[0] - 1.0).abs() < 1e-11 && tiny.normalized[1] < 1e-11);
        assert!(analytic_schmidt(0.0, 3).is_err());
    }

    #[test]
    fn scan_starts_separable_and_grows() {
        let edge = band_edge_params_analytic(&SshParams::new(1.0, 0.5).unwrap()).unwrap();
        let setup = EntropyScanSetup {
            grid: grid(64),
            omega0: 1.0,
            sigma: 0.1,
            v0: 1.0,
        };
        let rows = entropy_scan(&[0.0, 1.0, 10.0], &setup, &edge).unwrap();
        let s: Vec<f64> = rows.iter().map(|r| r.spectrum.as_ref().unwrap().entropy).collect();
        assert!(s[0] < 1e-6);
        assert!(s[0] <= s[1] && s[1] <= s[2]);
        let csv = scan_to_csv(&rows);
        assert!(csv.starts_with("zeta,S_nats,S_bits,lambda0"));
    }
}
