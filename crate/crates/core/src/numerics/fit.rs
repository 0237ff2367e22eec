use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Coefficients of `c0 + c1 x + c2 x^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Euclidean norm of the fit residuals.
    pub residual: f64,
}

impl QuadraticFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + self.c1 * x + 0.5 * self.c2 * x * x
    }
}

fn distinct_count(xs: &[f64]) -> usize {
    let mut sorted: Vec<f64> = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    sorted.len()
}

fn least_squares(design: DMatrix<f64>, ys: &[f64]) -> Result<DVector<f64>> {
    let rhs = DVector::from_column_slice(ys);
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax || smin.is_nan() {
        return Err(Error::DegenerateDesign(format!(
            "condition number {:e}",
            smax / smin
        )));
    }
    svd.solve(&rhs, 0.0)
        .map_err(|e| Error::DegenerateDesign(e.to_string()))
}

/// Least-squares fit of `c0 + c1 x + c2 x^2 / 2`.
pub fn polyfit_quadratic(xs: &[f64], ys: &[f64]) -> Result<QuadraticFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter(format!(
            "fit needs matching lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if distinct_count(xs) < 3 {
        return Err(Error::DegenerateDesign(
            "quadratic fit needs at least 3 distinct abscissae".into(),
        ));
    }
    let design = DMatrix::from_fn(xs.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => xs[i],
        _ => 0.5 * xs[i] * xs[i],
    });
    let c = least_squares(design, ys)?;
    let fit = QuadraticFit {
        c0: c[0],
        c1: c[1],
        c2: c[2],
        residual: 0.0,
    };
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - fit.eval(x)).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(QuadraticFit { residual, ..fit })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Coefficient of determination; 1 when `ys` is constant and fitted exactly.
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter("fit needs matching lengths".into()));
    }
    if distinct_count(xs) < 2 {
        return Err(Error::DegenerateDesign(
            "linear fit needs at least 2 distinct abscissae".into(),
        ));
    }
    let design = DMatrix::from_fn(xs.len(), 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
    let c = least_squares(design, ys)?;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - c[0] - c[1] * x).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit {
        intercept: c[0],
        slope: c[1],
        r_squared,
    })
}
