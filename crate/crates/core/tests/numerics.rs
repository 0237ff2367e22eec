use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use sshcav::numerics::{
    bz_integrate, linear_fit, pairwise_sum, polyfit_quadratic, principal_value, simpson, svd_singular_values,
};

/// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

fn gram(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let g = m.transpose() * m;
    (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| g[(i, j)]).collect()).collect()
}

#[test]
fn singular_values_match_jacobi_oracle() {
    let m = DMatrix::from_fn(6, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0 + 0.1 * (i as f64));
    let sv = svd_singular_values(&m).unwrap();
    let ev = jacobi_eigenvalues(gram(&m));
    for (s, e) in sv.iter().zip(&ev) {
        assert!((s * s - e).abs() < 1e-9 * ev[0], "{s} vs {e}");
    }
}

fn matrix_8x8() -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-2.0f64..2.0, 64).prop_map(|v| DMatrix::from_vec(8, 8, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_gram_matrices_agree(m in matrix_8x8()) {
        let sv = svd_singular_values(&m).unwrap();
        let ev = jacobi_eigenvalues(gram(&m));
        for (s, e) in sv.iter().zip(&ev) {
            prop_assert!((s * s - e).abs() < 1e-9 * (1.0 + ev[0]));
        }
    }

    #[test]
    fn singular_values_ignore_row_and_column_order(m in matrix_8x8(), shift in 1usize..8) {
        let permuted = DMatrix::from_fn(8, 8, |i, j| m[((i + shift) % 8, (j * 3 + shift) % 8)]);
        let a = svd_singular_values(&m).unwrap();
        let b = svd_singular_values(&permuted).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10 * (1.0 + a[0]));
        }
    }

    #[test]
    fn pairwise_sum_matches_naive(v in proptest::collection::vec(-1e3f64..1e3, 1..500)) {
        let naive: f64 = v.iter().sum();
        let p = pairwise_sum(v.len(), |i| v[i]);
        let scale: f64 = v.iter().map(|x| x.abs()).sum();
        prop_assert!((p - naive).abs() <= 1e-12 * (1.0 + scale));
    }

    #[test]
    fn quadratic_fit_recovers_coefficients(c0 in -5.0f64..5.0, c1 in -1.0f64..1.0, c2 in -0.5f64..0.5) {
        let xs: Vec<f64> = (0..6).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c0 + c1 * x + 0.5 * c2 * x * x).collect();
        let f = polyfit_quadratic(&xs, &ys).unwrap();
        prop_assert!((f.c0 - c0).abs() < 1e-10 && (f.c1 - c1).abs() < 1e-10 && (f.c2 - c2).abs() < 1e-10);
    }
}

#[test]
fn trapezoid_is_spectral_for_periodic_integrands() {
    // (1/2pi) int exp(a cos k) dk = I0(a); series oracle for I0.
    let a: f64 = 0.7;
    let mut i0 = 0.0;
    let mut term = 1.0;
    for m in 0..30 {
        if m > 0 {
            term *= (a / 2.0).powi(2) / (m as f64 * m as f64);
        }
        i0 += term;
    }
    let got = bz_integrate(|k| Complex64::new((a * k.cos()).exp(), 0.0), 64).unwrap();
    assert!((got.re - i0).abs() < 1e-14);
}

#[test]
fn simpson_converges_at_fourth_order() {
    let exact = 1.0 - (1.0f64).cos();
    let e1: f64 = (simpson(|x: f64| x.sin(), 0.0, 1.0, 16) - exact).abs();
    let e2: f64 = (simpson(|x: f64| x.sin(), 0.0, 1.0, 32) - exact).abs();
    let order = (e1 / e2).log2();
    assert!((order - 4.0).abs() < 0.1, "observed order {order}");
}

#[test]
fn principal_value_of_lorentzian_dispersion() {
    // P int_{-L}^{L} 1/(x - p) dx = ln((L - p)/(L + p)).
    let (l, p) = (3.0, 0.4);
    let got = principal_value(|_| 1.0, p, -l, l, 4000).unwrap();
    assert!((got - ((l - p) / (l + p)).ln()).abs() < 1e-10);
}

#[test]
fn linear_fit_reports_quality() {
    let xs = [0.0, 1.0, 2.0, 3.0];
    let f = linear_fit(&xs, &[1.0, 3.0, 5.0, 7.0]).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    let noisy = linear_fit(&xs, &[1.0, 3.5, 4.5, 7.0]).unwrap();
    assert!(noisy.r_squared < 1.0 && noisy.r_squared > 0.9);
}
