use std::f64::consts::PI;

use proptest::prelude::*;
use sshcav::cavity::{
    dressed_propagator, hopfield_branches, photon_self_energy, spectral_function, CavityModel, CavityParams,
};
use sshcav::model::SshParams;
use sshcav::numerics::FrequencyGrid;

fn ssh() -> SshParams {
    SshParams::new(1.0, 0.5).unwrap()
}

#[test]
fn spectral_weight_sums_to_one() {
    let p = ssh();
    let c = CavityParams::default().resonant_with(&p);
    let m = CavityModel::new(p, c, 4096).unwrap();
    // Window [omega_c - 100 eta, Delta_max + 100 eta], trapezoid.
    let (lo, hi) = (c.omega_c - 100.0 * c.eta, p.max_gap() + 100.0 * c.eta);
    let n = 40_000;
    let h = (hi - lo) / n as f64;
    let total: f64 = (0..=n)
        .map(|i| {
            let w = lo + i as f64 * h;
            let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
            weight * m.spectral(w, 0.0)
        })
        .sum::<f64>()
        * h;
    assert!((total - 1.0).abs() < 0.02, "sum rule {total}");
}

#[test]
fn bubble_refines_to_a_converged_value() {
    let p = ssh();
    let c = CavityParams::default();
    for w in [0.5, 1.7, 3.4] {
        let coarse = photon_self_energy(w, &p, &c, 4096).unwrap();
        let fine = photon_self_energy(w, &p, &c, 40960).unwrap();
        assert!((coarse - fine).norm() < 1e-9 * fine.norm().max(1e-12));
    }
}

#[test]
fn spectral_ridge_is_even_in_q() {
    let p = ssh();
    let c = CavityParams::default().resonant_with(&p);
    let m = CavityModel::new(p, c, 1024).unwrap();
    let map = m
        .spectral_map(&FrequencyGrid::new(0.8, 1.8, 41).unwrap(), &FrequencyGrid::new(-0.8, 0.8, 17).unwrap())
        .unwrap();
    for i in 0..41 {
        for j in 0..17 {
            let (a, b) = (map.get(i, j), map.get(i, 16 - j));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }
}

#[test]
fn propagator_peaks_track_the_dispersion_when_decoupled() {
    let p = ssh();
    let c = CavityParams {
        g: 0.0,
        ..CavityParams::default()
    };
    for q in [0.0, 0.5, 1.0] {
        let grid = FrequencyGrid::new(0.5, 2.0, 1501).unwrap();
        let best = grid
            .values()
            .into_iter()
            .max_by(|a, b| {
                let fa = dressed_propagator(*a, q, &p, &c, 256).unwrap().norm();
                let fb = dressed_propagator(*b, q, &p, &c, 256).unwrap().norm();
                fa.total_cmp(&fb)
            })
            .unwrap();
        let (lower, upper) = hopfield_branches(q, 0.0, c.mass_beta, c.omega_c);
        let bare = c.dispersion(q);
        assert!((best - bare).abs() <= grid.spacing());
        assert!(bare == lower || bare == upper);
    }
}

#[test]
fn hopfield_splitting_and_decoupled_limit() {
    for beta in [0.1, 0.5, 2.0] {
        let (lo, hi) = hopfield_branches(0.0, 0.05, beta, 1.0);
        assert!((hi - lo - 0.1).abs() < 1e-14);
    }
    let (lo, hi) = hopfield_branches(0.7, 0.0, 0.5, 1.0);
    assert_eq!((lo, hi), (1.0, 1.0 + 0.5 * 0.49));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn retarded_sign_and_positive_spectral_weight(
        w in -2.0f64..6.0,
        q in -1.5f64..1.5,
        t2 in prop_oneof![0.1f64..0.9, 1.1f64..2.0],
        g in 0.0f64..0.5,
    ) {
        let p = SshParams::new(1.0, t2).unwrap();
        let c = CavityParams { g, ..CavityParams::default() };
        let s = photon_self_energy(w, &p, &c, 256).unwrap();
        prop_assert!(s.im <= 0.0);
        let a = spectral_function(w, q, &p, &c, 256).unwrap();
        prop_assert!(a >= 0.0 && a.is_finite());
        let g_r = dressed_propagator(w, q, &p, &c, 256).unwrap();
        prop_assert!((a + g_r.im / PI).abs() == 0.0);
    }
}
