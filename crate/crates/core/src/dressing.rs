//! One-loop electron self-energy from virtual cavity-photon exchange and the
//! resulting dressed two-band energies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::CavityParams;
use crate::error::{Error, Result};
use crate::model::{band_energies, band_gap, SshParams};
use crate::numerics::{principal_value, simpson};
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Conduction,
    Valence,
}

/// `1 / (omega - omega_c + i eta)`.
pub fn bare_photon_green(omega: f64, c: &CavityParams) -> Complex64 {
    Complex64::new(omega - c.omega_c, c.eta).inv()
}

/// `g^2 mu(k)^2`; zero rather than an error where the dipole is undefined.
fn coupling(k: f64, p: &SshParams, c: &CavityParams) -> f64 {
    let mu = crate::model::dipole(k, p).unwrap_or(0.0);
    c.g * c.g * mu * mu
}

/// Band-diagonal self-energy: the electron in `band` emits a photon and drops
/// into the other band.
pub fn sigma_band(k: f64, omega: f64, band: Band, p: &SshParams, c: &CavityParams) -> Complex64 {
    let (ev, ec) = band_energies(k, p);
    let other = match band {
        Band::Conduction => ev,
        Band::Valence => ec,
    };
    bare_photon_green(omega - other, c) * coupling(k, p, c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionSelfEnergy {
    pub k: f64,
    pub omega: f64,
    pub sigma_cc: Complex64,
    pub sigma_vv: Complex64,
    pub sigma_cv: Complex64,
    pub sigma_vc: Complex64,
}

/// Off-diagonal 2x2 self-energy `g^2 mu^2 [[0, G(omega - Delta)], [G(omega + Delta), 0]]`.
pub fn sigma_matrix(k: f64, omega: f64, p: &SshParams, c: &CavityParams) -> FermionSelfEnergy {
    let gap = band_gap(k, p);
    let w = coupling(k, p, c);
    let zero = Complex64::new(0.0, 0.0);
    FermionSelfEnergy {
        k,
        omega,
        sigma_cc: zero,
        sigma_vv: zero,
        sigma_cv: bare_photon_green(omega - gap, c) * w,
        sigma_vc: bare_photon_green(omega + gap, c) * w,
    }
}

/// Default photon-momentum window `10 sqrt(eta / beta)`.
pub fn default_q_max(c: &CavityParams) -> Option<f64> {
    (c.mass_beta > 0.0).then(|| 10.0 * (c.eta / c.mass_beta).sqrt())
}

/// [`sigma_band`] integrated over photon momenta `|q| <= q_max` with
/// `omega_c(q) = omega_c + beta q^2` and a momentum-independent dipole.
pub fn sigma_band_dispersive(
    k: f64,
    omega: f64,
    band: Band,
    p: &SshParams,
    c: &CavityParams,
    n_q: usize,
    q_max: f64,
) -> Result<Complex64> {
    c.validate()?;
    if !(q_max.is_finite() && q_max > 0.0) {
        return Err(Error::InvalidParameter(format!("q_max must be > 0, got {q_max}")));
    }
    if n_q < 64 {
        return Err(Error::InvalidParameter(format!("need at least 64 photon momenta, got {n_q}")));
    }
    let (ev, ec) = band_energies(k, p);
    let other = match band {
        Band::Conduction => ev,
        Band::Valence => ec,
    };
    let x = omega - other;
    let density = simpson(
        |q| Complex64::new(x - c.dispersion(q), c.eta).inv(),
        -q_max,
        q_max,
        n_q,
    ) / (2.0 * std::f64::consts::PI);
    Ok(density * coupling(k, p, c))
}

/// `Re Sigma^(c)` rebuilt from the cavity spectral weight:
/// `g^2 mu^2 (1/pi) P int dw' Im G(w') / (w' - x)`, `x = omega - eps_v(k)`,
/// over `omega_c +/- half_width`.
pub fn lamb_shift(
    k: f64,
    omega: f64,
    p: &SshParams,
    c: &CavityParams,
    half_width: f64,
    n_w: usize,
) -> Result<f64> {
    c.validate()?;
    let w = coupling(k, p, c);
    if w == 0.0 {
        return Ok(0.0);
    }
    let (ev, _) = band_energies(k, p);
    let x = omega - ev;
    let im_g = |wp: f64| bare_photon_green(wp, c).im;
    let pv = principal_value(im_g, x, c.omega_c - half_width, c.omega_c + half_width, n_w)?;
    Ok(w * pv / std::f64::consts::PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBands {
    pub e_plus: f64,
    pub e_minus: f64,
}

/// `E = +/- sqrt((Delta/2)^2 + |Sigma_cv|^2)`.
pub fn dressed_bands(k: f64, omega: f64, p: &SshParams, c: &CavityParams) -> DressedBands {
    let half = 0.5 * band_gap(k, p);
    let s = sigma_matrix(k, omega, p, c).sigma_cv.norm();
    let e = half.hypot(s);
    DressedBands {
        e_plus: e,
        e_minus: -e,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressingSample {
    pub k: f64,
    pub omega: f64,
    pub sigma_cv: Complex64,
    pub bands: DressedBands,
}

pub fn dressing_sample(k: f64, omega: f64, p: &SshParams, c: &CavityParams) -> DressingSample {
    DressingSample {
        k,
        omega,
        sigma_cv: sigma_matrix(k, omega, p, c).sigma_cv,
        bands: dressed_bands(k, omega, p, c),
    }
}

pub fn samples_to_csv(samples: &[DressingSample]) -> String {
    let mut t = CsvTable::new(&["k", "omega", "ReScv", "ImScv", "Eplus", "Eminus"]);
    for s in samples {
        t.push(&[
            s.k.into(),
            s.omega.into(),
            s.sigma_cv.re.into(),
            s.sigma_cv.im.into(),
            s.bands.e_plus.into(),
            s.bands.e_minus.into(),
        ]);
    }
    t.into_string()
}
