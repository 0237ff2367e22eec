//! Deterministic quadrature rules.
//!
//! Every sum goes through [`pairwise_sum`], which splits index ranges at fixed
//! midpoints. Results therefore never depend on how callers parallelize the
//! sample evaluation around them.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Smallest Brillouin-zone grid accepted by the integrators.
pub const MIN_BZ_POINTS: usize = 64;

const PAIRWISE_BLOCK: usize = 16;

/// Sum `term(0) + ... + term(n - 1)` by recursive halving.
pub fn pairwise_sum<T, F>(n: usize, term: F) -> T
where
    T: Copy + Zero + Add<Output = T>,
    F: Fn(usize) -> T,
{
    fn rec<T, F>(lo: usize, hi: usize, term: &F) -> T
    where
        T: Copy + Zero + Add<Output = T>,
        F: Fn(usize) -> T,
    {
        if hi - lo <= PAIRWISE_BLOCK {
            let mut acc = T::zero();
            for i in lo..hi {
                acc = acc + term(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            rec(lo, mid, term) + rec(mid, hi, term)
        }
    }
    rec(0, n, &term)
}

/// Node `j` of the periodic `n_k`-point grid on `[-pi, pi)`.
#[inline]
pub fn bz_node(j: usize, n_k: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n_k as f64
}

pub fn check_bz_points(n_k: usize) -> Result<()> {
    if n_k < MIN_BZ_POINTS {
        return Err(Error::InvalidParameter(format!(
            "Brillouin-zone grid needs at least {MIN_BZ_POINTS} points, got {n_k}"
        )));
    }
    Ok(())
}

/// `(1/2pi) * integral_{-pi}^{pi} f(k) dk` by the periodic trapezoidal rule
/// with `n_k` intervals.
pub fn bz_integrate<F>(f: F, n_k: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    check_bz_points(n_k)?;
    let samples: Vec<Complex64> = (0..n_k).map(|j| f(bz_node(j, n_k))).collect();
    if let Some(j) = samples
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::NonFiniteSample { at: bz_node(j, n_k) });
    }
    Ok(pairwise_sum(n_k, |j| samples[j]) / n_k as f64)
}

/// Composite Simpson rule on `[a, b]`. An odd `intervals` is rounded up.
pub fn simpson<T, F>(f: F, a: f64, b: f64, intervals: usize) -> T
where
    T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let n = simpson_intervals(intervals);
    let h = (b - a) / n as f64;
    let node = |i: usize| if i == n { b } else { a + i as f64 * h };
    let sum = pairwise_sum(n + 1, |i| {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        f(node(i)) * w
    });
    sum * (h / 3.0)
}

fn simpson_intervals(n: usize) -> usize {
    let n = n.max(2);
    n + n % 2
}

/// Principal value of `integral_a^b f(x) / (x - pole) dx`.
///
/// Inside `[a, b]` the largest window symmetric about the pole is folded onto
/// itself, `integral_0^delta [f(pole + t) - f(pole - t)] / t dt`, which is
/// regular; the leftover one-sided piece is ordinary Simpson quadrature. A pole
/// outside `[a, b]` gives the plain integral.
pub fn principal_value<F>(f: F, pole: f64, a: f64, b: f64, intervals: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && pole.is_finite()) || b <= a {
        return Err(Error::InvalidParameter(format!(
            "principal value needs a finite range a < b, got [{a}, {b}] with pole {pole}"
        )));
    }
    let width = b - a;
    let edge_tol = 1e-14 * width.max(pole.abs());
    if (pole - a).abs() <= edge_tol || (pole - b).abs() <= edge_tol {
        return Err(Error::PoleOnBoundary { pole, a, b });
    }
    if pole < a || pole > b {
        return Ok(simpson(|x| f(x) / (x - pole), a, b, intervals));
    }

    let delta = (pole - a).min(b - pole);
    let n_sym = simpson_intervals(((intervals as f64) * delta / width).ceil() as usize);
    let h = delta / n_sym as f64;
    let eps = 1e-3 * h;
    let slope2 = (f(pole + eps) - f(pole - eps)) / eps;
    let folded = simpson(
        |t: f64| {
            if t == 0.0 {
                slope2
            } else {
                (f(pole + t) - f(pole - t)) / t
            }
        },
        0.0,
        delta,
        n_sym,
    );

    let rest_len = width - 2.0 * delta;
    if rest_len <= edge_tol {
        return Ok(folded);
    }
    let n_rest = simpson_intervals(((intervals as f64) * rest_len / width).ceil() as usize);
    let (lo, hi) = if pole - a > b - pole {
        (a, pole - delta)
    } else {
        (pole + delta, b)
    };
    let rest: f64 = simpson(|x| f(x) / (x - pole), lo, hi, n_rest);
    Ok(folded + rest)
}
