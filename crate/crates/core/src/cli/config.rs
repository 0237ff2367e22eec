//! Run configuration: one JSON document per command invocation.
//!
//! Every section is optional and falls back to the figure defaults; unknown
//! keys anywhere are rejected.

use serde::{Deserialize, Serialize};

use crate::cavity::CavityParams;
use crate::error::{Error, Result};
use crate::keldysh::ThermalState;
use crate::model::SshParams;
use crate::numerics::{FrequencyGrid, MIN_BZ_POINTS};
use crate::vertex::{InteractionKernel, VertexMethod};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: SshParams,
    pub cavity: CavityParams,
    pub kernel: InteractionKernel,
    pub thermal: ThermalState,
    pub grids: Grids,
    pub bands: BandsBlock,
    pub zak: ZakBlock,
    pub self_energy: SelfEnergyBlock,
    pub spectrum: SpectrumBlock,
    pub hopfield: HopfieldBlock,
    pub kerr_scan: KerrScanBlock,
    pub vertex: VertexBlock,
    pub saddle: SaddleBlock,
    pub biphoton: BiphotonBlock,
    pub schmidt_scan: SchmidtScanBlock,
    pub dressed_bands: DressedBandsBlock,
    pub keldysh: KeldyshBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Brillouin-zone points for one-dimensional bubble integrals.
    pub n_k: usize,
    /// Points per axis for the two-dimensional vertex integral.
    pub n_k2d: usize,
    pub omega: FrequencyGrid,
    pub q: FrequencyGrid,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            n_k: 4096,
            n_k2d: 512,
            omega: FrequencyGrid {
                start: 0.5,
                stop: 3.5,
                count: 200,
            },
            q: FrequencyGrid {
                start: -1.0,
                stop: 1.0,
                count: 100,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandsBlock {
    pub n_points: usize,
}

impl Default for BandsBlock {
    fn default() -> Self {
        Self { n_points: 201 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZakBlock {
    /// Extra ratios `t2/t1` evaluated besides the configured model.
    pub ratios: Vec<f64>,
    pub n_k: usize,
}

impl Default for ZakBlock {
    fn default() -> Self {
        Self {
            ratios: Vec::new(),
            n_k: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfEnergyBlock {
    /// Photon number `n` in `Sigma(omega, n)`.
    pub photon_number: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumBlock {
    /// Pin `omega_c` to the band-edge gap before computing.
    pub resonant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopfieldBlock {
    /// Coupling of the two-level reference; defaults to `cavity.g`.
    pub g_hop: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KerrScanBlock {
    pub r_values: Vec<f64>,
    pub n_max: u32,
    pub tol: f64,
    pub max_iter: usize,
    pub resonant: bool,
}

impl Default for KerrScanBlock {
    fn default() -> Self {
        Self {
            r_values: vec![0.5, 0.7, 0.9, 1.1, 1.3, 1.5],
            n_max: 5,
            tol: crate::kerr::DEFAULT_TOL,
            max_iter: crate::kerr::DEFAULT_MAX_ITER,
            resonant: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VertexBlock {
    /// Shared axis for `omega1` and `omega2`.
    pub grid: FrequencyGrid,
    pub methods: Vec<VertexMethod>,
    /// Overall coupling normalization of the direct evaluator.
    pub prefactor: f64,
}

impl Default for VertexBlock {
    fn default() -> Self {
        Self {
            grid: FrequencyGrid {
                start: 1.05,
                stop: 1.3,
                count: 11,
            },
            methods: vec![VertexMethod::Direct, VertexMethod::Stationary],
            prefactor: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaddleBlock {
    /// Use the closed-form band-edge parameters instead of finite differences.
    pub analytic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiphotonBlock {
    pub omega0: f64,
    pub sigma: f64,
    pub count: usize,
    pub zeta: f64,
}

impl Default for BiphotonBlock {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            sigma: 0.1,
            count: 256,
            zeta: 10.0,
        }
    }
}

impl BiphotonBlock {
    /// `omega0 +/- 4 sigma` with `count` points.
    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::new(self.omega0 - 4.0 * self.sigma, self.omega0 + 4.0 * self.sigma, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchmidtScanBlock {
    pub zetas: Vec<f64>,
    pub omega0: f64,
    pub sigma: f64,
    pub count: usize,
}

impl Default for SchmidtScanBlock {
    fn default() -> Self {
        Self {
            zetas: vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0],
            omega0: 1.0,
            sigma: 0.1,
            count: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DressedBandsBlock {
    pub n_points: usize,
    pub omegas: Vec<f64>,
}

impl Default for DressedBandsBlock {
    fn default() -> Self {
        Self {
            n_points: 201,
            omegas: vec![0.0, 0.5, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KeldyshBlock {
    pub q: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be > 0, got {x}")))
    }
}

fn at_least(name: &str, n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be >= {min}, got {n}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.cavity.validate()?;
        self.kernel.validate()?;
        self.thermal.validate()?;
        at_least("grids.n_k", self.grids.n_k, MIN_BZ_POINTS)?;
        at_least("grids.n_k2d", self.grids.n_k2d, MIN_BZ_POINTS)?;
        self.grids.omega.validate()?;
        self.grids.q.validate()?;
        at_least("bands.n_points", self.bands.n_points, 2)?;
        at_least("zak.n_k", self.zak.n_k, MIN_BZ_POINTS)?;
        for &r in &self.zak.ratios {
            SshParams::from_ratio(r)?;
        }
        if let Some(g) = self.hopfield.g_hop {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidParameter(format!("hopfield.g_hop must be >= 0, got {g}")));
            }
        }
        let k = &self.kerr_scan;
        at_least("kerr_scan.n_max", k.n_max as usize, 3)?;
        positive("kerr_scan.tol", k.tol)?;
        at_least("kerr_scan.max_iter", k.max_iter, 1)?;
        for &r in &k.r_values {
            if !(r.is_finite() && r > 0.0) || (r - 1.0).abs() < crate::kerr::CRITICAL_GUARD {
                return Err(Error::InvalidParameter(format!(
                    "kerr_scan.r_values entry {r} must be positive and at least {} from 1",
                    crate::kerr::CRITICAL_GUARD
                )));
            }
        }
        self.vertex.grid.validate()?;
        if !self.vertex.prefactor.is_finite() {
            return Err(Error::InvalidParameter("vertex.prefactor must be finite".into()));
        }
        let b = &self.biphoton;
        positive("biphoton.sigma", b.sigma)?;
        at_least("biphoton.count", b.count, 2)?;
        if !(b.zeta.is_finite() && b.zeta >= 0.0) {
            return Err(Error::InvalidParameter(format!("biphoton.zeta must be >= 0, got {}", b.zeta)));
        }
        b.grid()?;
        let s = &self.schmidt_scan;
        positive("schmidt_scan.sigma", s.sigma)?;
        at_least("schmidt_scan.count", s.count, 2)?;
        if s.zetas.iter().any(|z| !(z.is_finite() && *z >= 0.0)) {
            return Err(Error::InvalidParameter("schmidt_scan.zetas must be finite and >= 0".into()));
        }
        at_least("dressed_bands.n_points", self.dressed_bands.n_points, 2)?;
        if self.dressed_bands.omegas.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("dressed_bands.omegas must be finite".into()));
        }
        if !self.keldysh.q.is_finite() {
            return Err(Error::InvalidParameter("keldysh.q must be finite".into()));
        }
        Ok(())
    }
}
