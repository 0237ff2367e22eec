use std::f64::consts::PI;

use proptest::prelude::*;
use sshcav::cavity::CavityParams;
use sshcav::dressing::{
    dressed_bands, lamb_shift, sigma_band, sigma_band_dispersive, sigma_matrix, Band,
};
use sshcav::model::{band_energies, band_gap, SshParams};

fn ssh() -> SshParams {
    SshParams::new(1.0, 0.5).unwrap()
}

fn cavity() -> CavityParams {
    CavityParams {
        omega_c: 1.0,
        mass_beta: 0.5,
        g: 0.05,
        eta: 0.01,
    }
}

#[test]
fn zone_edge_is_undressed() {
    let p = ssh();
    for w in [-2.0, 0.0, 1.0, 3.0] {
        for g in [0.05, 0.5, 2.0] {
            let c = CavityParams { g, ..cavity() };
            let s = sigma_matrix(PI, w, &p, &c);
            assert!(s.sigma_cv.norm() < 1e-15 && s.sigma_vc.norm() < 1e-15);
            let b = dressed_bands(PI, w, &p, &c);
            assert!((b.e_plus - 0.5 * band_gap(PI, &p)).abs() < 1e-15);
        }
    }
}

#[test]
fn dressing_is_weak_across_the_zone() {
    let p = ssh();
    for j in 0..400 {
        let k = -PI + (j as f64 + 0.5) * 2.0 * PI / 400.0;
        let s = sigma_matrix(k, band_energies(k, &p).1, &p, &cavity());
        assert!(s.sigma_cv.norm() / band_gap(k, &p) < 1e-2);
    }
}

#[test]
fn kramers_kronig_reproduces_the_dispersive_part() {
    let p = ssh();
    let c = cavity();
    let k = PI / 2.0;
    let w = band_energies(k, &p).1;
    let direct = sigma_band(k, w, Band::Conduction, &p, &c).re;
    let rebuilt = lamb_shift(k, w, &p, &c, 2000.0 * c.eta, 400_000).unwrap();
    assert!((rebuilt / direct - 1.0).abs() < 0.01, "{rebuilt} vs {direct}");
}

#[test]
fn flat_cavity_window_integral() {
    let p = ssh();
    let c = CavityParams { mass_beta: 0.0, ..cavity() };
    let (k, w, q_max) = (0.4, 0.3, 0.2);
    let got = sigma_band_dispersive(k, w, Band::Conduction, &p, &c, 64, q_max).unwrap();
    let want = sigma_band(k, w, Band::Conduction, &p, &c) * (q_max / PI);
    assert!((got - want).norm() < 1e-14 * want.norm());
}

proptest! {
    #[test]
    fn retarded_even_and_quadratic_in_coupling(k in -PI..PI, w in -4.0f64..4.0, g in 0.01f64..1.0) {
        let p = ssh();
        let c = CavityParams { g, ..cavity() };
        let a = sigma_matrix(k, w, &p, &c);
        let b = sigma_matrix(-k, w, &p, &c);
        prop_assert!((a.sigma_cv - b.sigma_cv).norm() <= 1e-14 * a.sigma_cv.norm().max(1e-300));
        prop_assert!(a.sigma_cv.im <= 0.0 && a.sigma_vc.im <= 0.0);
        let c2 = CavityParams { g: 2.0 * g, ..cavity() };
        let a2 = sigma_matrix(k, w, &p, &c2);
        prop_assert!((a2.sigma_cv - a.sigma_cv * 4.0).norm() <= 1e-12 * a2.sigma_cv.norm().max(1e-300));
        let bands = dressed_bands(k, w, &p, &c);
        prop_assert!(bands.e_plus - bands.e_minus >= band_gap(k, &p));
        let disp = sigma_band_dispersive(k, w, Band::Valence, &p, &c, 256, 0.5).unwrap();
        prop_assert!(disp.im <= 0.0);
    }
}
