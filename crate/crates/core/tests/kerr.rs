use num_complex::Complex64;
use sshcav::cavity::{CavityModel, CavityParams};
use sshcav::kerr::{kerr_closed_form, kerr_from_fit, kerr_scan, solve_omega_ladder, KerrScanOptions};
use sshcav::model::SshParams;
use sshcav::numerics::complex_newton;

fn resonant(t2: f64, g: f64) -> (SshParams, CavityParams) {
    let p = SshParams::new(1.0, t2).unwrap();
    let c = CavityParams {
        g,
        eta: 1e-3,
        ..CavityParams::default()
    }
    .resonant_with(&p);
    (p, c)
}

fn fitted_u(t2: f64, g: f64) -> sshcav::kerr::KerrResult {
    let (p, c) = resonant(t2, g);
    let m = CavityModel::new(p, c, 16384).unwrap();
    kerr_from_fit(&solve_omega_ladder(&m, 5, 1e-13, 100).unwrap()).unwrap()
}

#[test]
fn constant_self_energy_fixed_point() {
    // omega = omega_c + s (n + 1) has the obvious root.
    let s = Complex64::new(-0.003, -0.0004);
    for n in 0..5u32 {
        let shift = s * f64::from(n + 1);
        let r = complex_newton(|z| z - 1.0 - shift, |_| Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 1e-14, 5)
            .unwrap();
        assert!((r.root - (1.0 + shift)).norm() < 1e-15);
    }
}

#[test]
fn topological_resonance_is_attractive() {
    let k = fitted_u(1.5, 0.05);
    assert!(k.u.re < 0.0);
    assert!(k.omega_n_list.iter().all(|w| w.im <= 0.0));
}

#[test]
fn u_scales_as_coupling_squared() {
    let scaled: Vec<f64> = [0.005, 0.01, 0.02].iter().map(|&g| fitted_u(0.5, g).u.re / (g * g)).collect();
    for s in &scaled {
        assert!((s / scaled[0] - 1.0).abs() < 0.01, "{scaled:?}");
    }
}

#[test]
fn quadratic_model_is_adequate() {
    for g in [0.005, 0.01, 0.02] {
        let k = fitted_u(0.5, g);
        let bound = 1e-6 * k.u.norm() * 25.0;
        assert!(k.fit_residual < bound, "g={g}: residual {:.3e} vs bound {bound:.3e}", k.fit_residual);
    }
}

#[test]
fn ladder_steps_are_bounded_by_the_self_energy() {
    let (p, c) = resonant(0.5, 0.05);
    let m = CavityModel::new(p, c, 16384).unwrap();
    let ladder = solve_omega_ladder(&m, 5, 1e-13, 100).unwrap();
    let max_sigma = ladder
        .iter()
        .map(|w| m.self_energy(w.re).norm())
        .fold(0.0, f64::max);
    for pair in ladder.windows(2) {
        assert!((pair[1] - pair[0]).norm() <= 2.0 * max_sigma);
    }
}

#[test]
fn closed_form_is_positive_far_below_the_band() {
    let p = SshParams::new(1.0, 0.5).unwrap();
    let c = CavityParams {
        omega_c: 0.25,
        g: 0.05,
        eta: 1e-4,
        ..CavityParams::default()
    };
    assert!(kerr_closed_form(&p, &c, 8192).unwrap().re > 0.0);
}

#[test]
fn scan_rows_are_finite_and_ordered() {
    let p = SshParams::new(1.0, 0.5).unwrap();
    let c = CavityParams {
        g: 0.01,
        eta: 1e-3,
        ..CavityParams::default()
    };
    let opts = KerrScanOptions {
        n_k: 8192,
        ..KerrScanOptions::default()
    };
    let rows = kerr_scan(&[0.5, 1.5], &p, &c, &opts).unwrap();
    assert_eq!(rows.iter().map(|r| r.r).collect::<Vec<_>>(), vec![0.5, 1.5]);
    for row in &rows {
        let fit = row.fit.as_ref().unwrap();
        assert!(fit.u.re.is_finite() && fit.u.im.is_finite());
        assert_eq!(row.omega_c, 2.0 * (1.0 - row.r).abs());
    }
}
