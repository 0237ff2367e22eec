//! Keldysh-sector photon observables in the thermal-bath approximation.
//!
//! Conventions: `Sigma^K = -2i Im Sigma^R (1 + 2 n_B)`, `G^K = G^R Sigma^K G^A`,
//! and the occupation is read off as `n = (G^K / (-2i Im G^R) - 1) / 2`, which
//! returns `n_B` exactly when the bath dominates the linewidth. The bare `i eta`
//! regulator is a spectator and carries no occupation of its own.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::{spectral_from_retarded, CavityModel, CavityParams};
use crate::error::{Error, Result};
use crate::model::SshParams;
use crate::numerics::FrequencyGrid;
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalState {
    /// Bath temperature with `k_B = 1`.
    pub temperature: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        let th = Self { temperature };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be finite and >= 0, got {}",
                self.temperature
            )));
        }
        Ok(())
    }
}

/// Bose-Einstein occupation `1 / (exp(omega/T) - 1)`, zero at `T = 0`.
pub fn bose_occupation(omega: f64, th: &ThermalState) -> Result<f64> {
    th.validate()?;
    if omega <= 0.0 || omega.is_nan() {
        return Err(Error::NonPositiveFrequency(omega));
    }
    if th.temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / th.temperature).exp_m1())
}

/// One Keldysh-resolved sample of the cavity photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeldyshSample {
    pub omega: f64,
    pub q: f64,
    pub retarded: Complex64,
    pub keldysh: Complex64,
    pub spectral: f64,
    pub occupation: f64,
}

/// Cavity model plus bath temperature.
#[derive(Debug, Clone)]
pub struct KeldyshModel {
    cavity: CavityModel,
    thermal: ThermalState,
}

impl KeldyshModel {
    pub fn new(cavity: CavityModel, thermal: ThermalState) -> Result<Self> {
        thermal.validate()?;
        Ok(Self { cavity, thermal })
    }

    pub fn cavity(&self) -> &CavityModel {
        &self.cavity
    }

    pub fn self_energy(&self, omega: f64) -> Result<Complex64> {
        let sigma_r = self.cavity.self_energy(omega);
        let nb = bose_occupation(omega, &self.thermal)?;
        Ok(Complex64::new(0.0, -2.0 * sigma_r.im * (1.0 + 2.0 * nb)))
    }

    /// Retarded propagator through the same Dyson path as the cavity module.
    pub fn retarded(&self, omega: f64, q: f64) -> Complex64 {
        self.cavity.propagator(omega, q)
    }

    pub fn keldysh(&self, omega: f64, q: f64) -> Result<Complex64> {
        Ok(self.sample(omega, q)?.keldysh)
    }

    pub fn sample(&self, omega: f64, q: f64) -> Result<KeldyshSample> {
        let sigma_r = self.cavity.self_energy(omega);
        let nb = bose_occupation(omega, &self.thermal)?;
        let sigma_k = Complex64::new(0.0, -2.0 * sigma_r.im * (1.0 + 2.0 * nb));
        let gr = self.cavity.propagator_with(omega, q, sigma_r);
        let ga = gr.conj();
        let gk = sigma_k * (gr * ga);
        if gr.im.abs() < f64::MIN_POSITIVE {
            return Err(Error::ZeroSpectralWeight(omega));
        }
        let occupation = 0.5 * (gk.im / (-2.0 * gr.im) - 1.0);
        Ok(KeldyshSample {
            omega,
            q,
            retarded: gr,
            keldysh: gk,
            spectral: spectral_from_retarded(gr),
            occupation,
        })
    }

    pub fn sweep(&self, omega_grid: &FrequencyGrid, q: f64) -> Result<Vec<KeldyshSample>> {
        use rayon::prelude::*;
        omega_grid.validate()?;
        (0..omega_grid.count)
            .into_par_iter()
            .map(|i| self.sample(omega_grid.value(i), q))
            .collect()
    }
}

pub fn keldysh_self_energy(
    omega: f64,
    p: &SshParams,
    c: &CavityParams,
    th: &ThermalState,
    n_k: usize,
) -> Result<Complex64> {
    KeldyshModel::new(CavityModel::new(*p, *c, n_k)?, *th)?.self_energy(omega)
}

pub fn keldysh_green(
    omega: f64,
    q: f64,
    p: &SshParams,
    c: &CavityParams,
    th: &ThermalState,
    n_k: usize,
) -> Result<Complex64> {
    KeldyshModel::new(CavityModel::new(*p, *c, n_k)?, *th)?.keldysh(omega, q)
}

pub fn spectral_function(omega: f64, q: f64, p: &SshParams, c: &CavityParams, n_k: usize) -> Result<f64> {
    let m = CavityModel::new(*p, *c, n_k)?;
    let k = KeldyshModel::new(m, ThermalState::default())?;
    Ok(spectral_from_retarded(k.retarded(omega, q)))
}

pub fn occupation(
    omega: f64,
    q: f64,
    p: &SshParams,
    c: &CavityParams,
    th: &ThermalState,
    n_k: usize,
) -> Result<f64> {
    Ok(KeldyshModel::new(CavityModel::new(*p, *c, n_k)?, *th)?
        .sample(omega, q)?
        .occupation)
}

pub fn samples_to_csv(samples: &[KeldyshSample]) -> String {
    let mut t = CsvTable::new(&["omega", "q", "ReGK", "ImGK", "A", "n"]);
    for s in samples {
        t.push(&[
            s.omega.into(),
            s.q.into(),
            s.keldysh.re.into(),
            s.keldysh.im.into(),
            s.spectral.into(),
            s.occupation.into(),
        ]);
    }
    t.into_string()
}
