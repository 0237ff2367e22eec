use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn sorted_descending(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Singular values of a real matrix in nonincreasing order.
pub fn svd_singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    for (idx, v) in m.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry {
                row: idx % m.nrows(),
                col: idx / m.nrows(),
            });
        }
    }
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let sv = m.clone().svd(false, false).singular_values;
    Ok(sorted_descending(sv.iter().copied().collect()))
}

/// Singular values of a complex matrix in nonincreasing order.
pub fn svd_singular_values_complex(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    for (idx, v) in m.iter().enumerate() {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: idx % m.nrows(),
                col: idx / m.nrows(),
            });
        }
    }
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let sv = m.clone().svd(false, false).singular_values;
    Ok(sorted_descending(sv.iter().copied().collect()))
}
