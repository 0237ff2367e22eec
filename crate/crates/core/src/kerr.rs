//! Photon-number-dependent cavity resonance and the Kerr coefficients.
//!
//! `omega_n` solves `omega = omega_c + Sigma(omega, n)` in the complex plane;
//! a quadratic fit `omega_n ~ omega_0 + U n + U' n^2 / 2` yields `U` and `U'`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cavity::{CavityModel, CavityParams};
use crate::error::{Error, Result};
use crate::model::SshParams;
use crate::numerics::{complex_newton, polyfit_quadratic};
use crate::output::CsvTable;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Scans refuse ratios closer than this to the gap-closing point.
pub const CRITICAL_GUARD: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct KerrResult {
    pub omega0: Complex64,
    pub u: Complex64,
    pub u_prime: Complex64,
    pub omega_n_list: Vec<Complex64>,
    pub fit_residual: f64,
}

/// Root of `omega - omega_c - Sigma(omega, n)` seeded at `seed`.
pub fn solve_omega_n_from(
    model: &CavityModel,
    n: u32,
    seed: Complex64,
    tol: f64,
    max_iter: usize,
) -> Result<Complex64> {
    let c = &model.cavity;
    let scale = c.g * c.g * f64::from(n + 1);
    let bubble = model.bubble();
    let f = |z: Complex64| z - c.omega_c - bubble.eval_complex(z, c.eta) * scale;
    let df = |z: Complex64| Complex64::new(1.0, 0.0) + bubble.eval_squared_complex(z, c.eta) * scale;
    Ok(complex_newton(f, df, seed, tol, max_iter)?.root)
}

/// `omega_0 .. omega_{n_max}`, each seeded from its predecessor.
pub fn solve_omega_ladder(model: &CavityModel, n_max: u32, tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let mut seed = Complex64::new(model.cavity.omega_c, 0.0);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let w = solve_omega_n_from(model, n, seed, tol, max_iter)?;
        out.push(w);
        seed = w;
    }
    Ok(out)
}

pub fn solve_omega_n(
    n: u32,
    p: &SshParams,
    c: &CavityParams,
    n_k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Complex64> {
    let model = CavityModel::new(*p, *c, n_k)?;
    Ok(*solve_omega_ladder(&model, n, tol, max_iter)?
        .last()
        .expect("ladder is never empty"))
}

/// Quadratic fit of `Re omega_n` and `Im omega_n` against `n = 0, 1, ...`.
pub fn kerr_from_fit(omega_n_list: &[Complex64]) -> Result<KerrResult> {
    if omega_n_list.len() < 4 {
        return Err(Error::DegenerateDesign(format!(
            "Kerr fit needs at least 4 photon numbers, got {}",
            omega_n_list.len()
        )));
    }
    let ns: Vec<f64> = (0..omega_n_list.len()).map(|n| n as f64).collect();
    let re: Vec<f64> = omega_n_list.iter().map(|z| z.re).collect();
    let im: Vec<f64> = omega_n_list.iter().map(|z| z.im).collect();
    let fr = polyfit_quadratic(&ns, &re)?;
    let fi = polyfit_quadratic(&ns, &im)?;
    Ok(KerrResult {
        omega0: Complex64::new(fr.c0, fi.c0),
        u: Complex64::new(fr.c1, fi.c1),
        u_prime: Complex64::new(fr.c2, fi.c2),
        omega_n_list: omega_n_list.to_vec(),
        fit_residual: fr.residual.hypot(fi.residual),
    })
}

/// `g^2 (1/2pi) int dk |mu|^2 / (omega_c - Delta + i eta)^2`.
pub fn kerr_closed_form(p: &SshParams, c: &CavityParams, n_k: usize) -> Result<Complex64> {
    let model = CavityModel::new(*p, *c, n_k)?;
    Ok(closed_form_for(&model))
}

fn closed_form_for(model: &CavityModel) -> Complex64 {
    let c = &model.cavity;
    model.bubble().eval_squared(c.omega_c, c.eta) * (c.g * c.g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KerrScanRow {
    pub r: f64,
    /// Cavity frequency actually used for the row.
    pub omega_c: f64,
    pub fit: Result<KerrResult>,
    pub closed_form: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrScanOptions {
    pub n_max: u32,
    pub n_k: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Re-pin `omega_c = 2|t1 - t2|` for every row.
    pub resonant: bool,
}

impl Default for KerrScanOptions {
    fn default() -> Self {
        Self {
            n_max: 5,
            n_k: 16384,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            resonant: true,
        }
    }
}

/// One row per ratio `r = t2/t1` (with `t1` from `p_base`), in input order.
///
/// Non-convergence is recorded per row; invalid ratios reject the whole scan.
pub fn kerr_scan(
    r_values: &[f64],
    p_base: &SshParams,
    c: &CavityParams,
    opts: &KerrScanOptions,
) -> Result<Vec<KerrScanRow>> {
    c.validate()?;
    for &r in r_values {
        if !(r.is_finite() && r > 0.0) || (r - 1.0).abs() < CRITICAL_GUARD {
            return Err(Error::InvalidParameter(format!(
                "scan ratio {r} must be positive and at least {CRITICAL_GUARD} away from 1"
            )));
        }
    }
    r_values
        .par_iter()
        .map(|&r| {
            let p = SshParams::new(p_base.t1, r * p_base.t1)?;
            let cav = if opts.resonant { c.resonant_with(&p) } else { *c };
            let model = CavityModel::new(p, cav, opts.n_k)?;
            let fit = solve_omega_ladder(&model, opts.n_max, opts.tol, opts.max_iter)
                .and_then(|ladder| kerr_from_fit(&ladder));
            Ok(KerrScanRow {
                r,
                omega_c: cav.omega_c,
                fit,
                closed_form: closed_form_for(&model),
            })
        })
        .collect()
}

pub fn scan_to_csv(rows: &[KerrScanRow]) -> String {
    let mut t = CsvTable::new(&[
        "r", "omega0", "ReU", "ImU", "ReUprime", "ImUprime", "residual", "converged", "ReUclosed",
        "ImUclosed",
    ]);
    for row in rows {
        let (w0, u, up, res, ok) = match &row.fit {
            Ok(k) => (k.omega0.re, k.u, k.u_prime, k.fit_residual, true),
            Err(_) => {
                let nan = Complex64::new(f64::NAN, f64::NAN);
                (f64::NAN, nan, nan, f64::NAN, false)
            }
        };
        t.push(&[
            row.r.into(),
            w0.into(),
            u.re.into(),
            u.im.into(),
            up.re.into(),
            up.im.into(),
            res.into(),
            ok.into(),
            row.closed_form.re.into(),
            row.closed_form.im.into(),
        ]);
    }
    t.into_string()
}
