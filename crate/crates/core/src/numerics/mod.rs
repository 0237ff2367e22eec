//! Shared numerical kernels: Brillouin-zone and frequency quadrature, principal
//! values, complex Newton iteration, least-squares fits and singular values.

mod fit;
mod grid;
mod linalg;
mod newton;
mod quadrature;

pub use fit::{linear_fit, polyfit_quadratic, LinearFit, QuadraticFit};
pub use grid::{local_maxima, ComplexSpectrum, FrequencyGrid};
pub use linalg::{svd_singular_values, svd_singular_values_complex};
pub use newton::{complex_newton, complex_newton_numeric, holomorphic_derivative, NewtonRoot};
pub use quadrature::{
    bz_integrate, bz_node, check_bz_points, pairwise_sum, principal_value, simpson, MIN_BZ_POINTS,
};
