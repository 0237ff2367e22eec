use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonRoot {
    pub root: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton iteration for a holomorphic `f` with derivative `df`.
///
/// Stops as soon as `|f(z)| < tol`; the returned residual is always below `tol`.
pub fn complex_newton<F, D>(
    f: F,
    df: D,
    z0: Complex64,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonRoot>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "Newton tolerance must be positive, got {tol}"
        )));
    }
    let mut z = z0;
    for iterations in 0..=max_iter {
        let fz = f(z);
        let residual = fz.norm();
        if !residual.is_finite() {
            return Err(Error::NoConvergence {
                last: z,
                residual,
                iterations,
            });
        }
        if residual < tol {
            return Ok(NewtonRoot {
                root: z,
                residual,
                iterations,
            });
        }
        if iterations == max_iter {
            return Err(Error::NoConvergence {
                last: z,
                residual,
                iterations,
            });
        }
        let d = df(z);
        if d.norm() == 0.0 || !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::NoConvergence {
                last: z,
                residual,
                iterations,
            });
        }
        z -= fz / d;
    }
    unreachable!("loop returns on its final iteration")
}

/// Central-difference derivative of a holomorphic function along the real axis.
pub fn holomorphic_derivative<F>(f: &F, z: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let h = 1e-6 * z.norm().max(1.0);
    (f(z + h) - f(z - h)) / (2.0 * h)
}

/// [`complex_newton`] with a numerical derivative.
pub fn complex_newton_numeric<F>(f: F, z0: Complex64, tol: f64, max_iter: usize) -> Result<NewtonRoot>
where
    F: Fn(Complex64) -> Complex64,
{
    complex_newton(&f, |z| holomorphic_derivative(&f, z), z0, tol, max_iter)
}
