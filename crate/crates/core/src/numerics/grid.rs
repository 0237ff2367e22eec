use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly spaced samples `start, ..., stop` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let grid = Self { start, stop, count };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.stop <= self.start {
            return Err(Error::InvalidParameter(format!(
                "grid requires stop > start, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid requires at least 2 points, got {}",
                self.count
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Complex samples (self-energies, propagators) on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: FrequencyGrid,
    samples: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(grid: FrequencyGrid, samples: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if samples.len() != grid.count {
            return Err(Error::GridMismatch);
        }
        if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFiniteSample { at: grid.value(i) });
        }
        Ok(Self { grid, samples })
    }

    /// Evaluate `f` at every grid point, stopping at the first error.
    pub fn try_from_fn<F>(grid: FrequencyGrid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        use rayon::prelude::*;
        grid.validate()?;
        let samples = (0..grid.count)
            .into_par_iter()
            .map(|i| f(grid.value(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, samples)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, z)| (self.grid.value(i), *z))
    }
}

/// Indices of interior local maxima (`v[i-1] < v[i] >= v[i+1]`).
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}
