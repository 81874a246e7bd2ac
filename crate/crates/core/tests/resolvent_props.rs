mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schrodobs::resolvent::{
    alpha_scan, bound_certificate, dense_min_eigenvalue, fit_power_law, strip_quasimode, strip_quasimode_state,
    BumpSpec, CertificateOperator, DenseResolvent, ScanStatus, StripFibers, TruncationStatus,
};
use schrodobs::{spatial_gramian, Error, ModelDescriptor, SpatialSet, SpectralModel, StateCoeffs};

fn torus1d(n: usize) -> SpectralModel {
    SpectralModel::build(&ModelDescriptor::torus1d(n)).unwrap()
}

fn residual_norm(m: &SpectralModel, u: &StateCoeffs, lambda: f64) -> f64 {
    u.coeffs
        .iter()
        .zip(m.modes())
        .map(|(c, mode)| ((lambda - mode.eigenvalue) * c.norm()).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn certificate_golden() {
    let m = torus1d(200);
    let cert = bound_certificate(&m, &SpatialSet::intervals(&[(0.0, PI)]), 100.0, 0.1).unwrap();
    let path = format!("{}/tests/golden/resolvent_torus1d_n200.json", env!("CARGO_MANIFEST_DIR"));
    let g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let expect = g["bound"].as_f64().unwrap();
    assert!((cert.bound - expect).abs() <= 1e-9, "{} vs {expect}", cert.bound);
    assert_eq!(cert.truncation, TruncationStatus::Adequate);
}

#[test]
fn certificate_trivial_cases() {
    let m = torus1d(10);
    let full = SpatialSet::full(&m);
    assert!((bound_certificate(&m, &full, 20.0, 0.0).unwrap().bound - 1.0).abs() < 1e-12);
    // λ = 20.5 sits 4.5 from 16 and 4.5 from 25
    let omega = SpatialSet::intervals(&[(0.0, 1.0)]);
    let s = 1e4;
    let b = bound_certificate(&m, &omega, 20.5, s).unwrap().bound;
    assert!((b / (s * 4.5) - 1.0).abs() < 1e-6);
    let warn = bound_certificate(&m, &omega, 30.0, 1.0).unwrap();
    assert_eq!(warn.truncation, TruncationStatus::Inadequate);
    assert!(bound_certificate(&m, &omega, 0.5, 1.0).is_err());
}

#[test]
fn minimizer_satisfies_rayleigh_identity() {
    let m = torus1d(16);
    let omega = SpatialSet::intervals(&[(0.0, PI)]);
    let g = spatial_gramian(&m, &omega).unwrap();
    let cert = bound_certificate(&m, &omega, 40.0, 0.05).unwrap();
    let u = &cert.minimizer;
    let q = (0.05 * residual_norm(&m, u, 40.0)).powi(2) + g.form(&u.coeffs);
    assert!((q - cert.bound.powi(2)).abs() <= 1e-9);
}

#[test]
fn alpha_scan_trivial_cases() {
    let m = torus1d(12);
    let full = DenseResolvent::new(&m, &SpatialSet::full(&m)).unwrap();
    for row in alpha_scan(&full, &[1.0, 4.0, 9.0], 0.9, 1e3).unwrap() {
        assert_eq!(row.s_star, Some(0.0));
    }
    let half = DenseResolvent::new(&m, &SpatialSet::intervals(&[(0.0, PI)])).unwrap();
    let floor = half.bound(9.0, 0.0);
    let rows = alpha_scan(&half, &[9.0], (floor + 0.1).min(0.99), 1e3).unwrap();
    assert!(rows[0].s_star.unwrap() > 0.0);
    assert!(rows[0].bound_at_s_star.unwrap() >= (floor + 0.1).min(0.99) - 1e-12);
}

#[test]
fn alpha_scan_reports_unreachable() {
    let m = torus1d(6);
    let op = DenseResolvent::new(&m, &SpatialSet::intervals(&[(0.0, 0.5)])).unwrap();
    // a ceiling this low cannot lift B from √λ_min(G) to 0.99
    let rows = alpha_scan(&op, &[4.0], 0.99, 1e-3).unwrap();
    assert_eq!(rows[0].status, ScanStatus::Unreachable);
    assert_eq!(rows[0].s_star, None);
}

#[test]
fn fibers_match_dense_strip() {
    let m = SpectralModel::build(&ModelDescriptor::torus2d(4)).unwrap();
    let strip = (1.0, 2.0);
    let fibers = StripFibers::new(&m, strip).unwrap();
    let g = spatial_gramian(&m, &SpatialSet::strip(&m, strip.0, strip.1).unwrap()).unwrap();
    let eigs = m.eigenvalues();
    for &(lambda, s) in &[(1.0, 0.0), (5.0, 0.1), (9.5, 0.3), (16.0, 1.0), (7.0, 2.0)] {
        let dense = dense_min_eigenvalue(&g, &eigs, lambda, s);
        let fib = fibers.min_eigenvalue(lambda, s);
        assert!((dense - fib).abs() <= 1e-10, "λ={lambda} s={s}: {dense} vs {fib}");
    }
}

#[test]
fn quasimode_invisible_pointwise() {
    let m = SpectralModel::build(&ModelDescriptor::torus2d(64)).unwrap();
    let strip = (1.0, 2.0);
    let chi = BumpSpec::default_for_strip(strip, TAU);
    let (u, tail) = strip_quasimode_state(&m, strip, &chi, 4).unwrap();
    assert!(tail < 1e-10);
    let pts: Vec<Vec<f64>> = (0..=20).map(|i| vec![1.0 + i as f64 * 0.05, 0.7]).collect();
    let vals = m.evaluate(&u, &pts).unwrap();
    assert!(vals.iter().all(|v| v.norm() < 1e-12));
    let inside = m.evaluate(&u, &[vec![chi.center, 0.0]]).unwrap()[0];
    let expect = chi.eval(chi.center, TAU) / TAU.sqrt();
    assert!((inside.norm() - expect).abs() < 1e-10);
}

#[test]
fn quasimode_ratio_independent_of_k() {
    let m = SpectralModel::build(&ModelDescriptor::torus2d(64)).unwrap();
    let strip = (1.0, 2.0);
    let chi = BumpSpec::default_for_strip(strip, TAU);
    let base = strip_quasimode(&m, strip, &chi, 0, 0.3).unwrap();
    for k in [1, 4, 8, 16, 32, -5] {
        let r = strip_quasimode(&m, strip, &chi, k, 0.3).unwrap();
        assert!((r.ratio / base.ratio - 1.0).abs() < 1e-9);
        assert!(r.omega_norm <= 1e-12);
        assert!(r.implied_alpha_lower_bound.is_some());
    }
    // ‖χ″‖/‖χ‖ from a finite-difference oracle on a fine grid
    let q = 1 << 14;
    let h = TAU / q as f64;
    let f: Vec<f64> = (0..q).map(|i| chi.eval(i as f64 * h, TAU)).collect();
    let (mut n2, mut d2) = (0.0, 0.0);
    for i in 0..q {
        let dd = (f[(i + 1) % q] - 2.0 * f[i] + f[(i + q - 1) % q]) / (h * h);
        n2 += f[i] * f[i];
        d2 += dd * dd;
    }
    assert!(((d2 / n2).sqrt() / base.ratio - 1.0).abs() < 1e-4);
}

#[test]
fn quasimode_rejects_overlap() {
    let m = SpectralModel::build(&ModelDescriptor::torus2d(16)).unwrap();
    let chi = BumpSpec {
        center: 2.5,
        half_width: 1.0,
        sharpness: 8.0,
    };
    assert!(matches!(strip_quasimode(&m, (1.0, 2.0), &chi, 2, 0.3), Err(Error::Config(_))));
}

#[test]
fn power_law_examples() {
    let exact: Vec<(f64, f64)> = [100.0, 400.0, 1600.0, 6400.0].iter().map(|&l: &f64| (l, l.powf(-0.5))).collect();
    let fit = fit_power_law(&exact).unwrap();
    assert!((fit.exponent + 0.5).abs() < 1e-12 && fit.residual < 1e-12);
    assert!((fit.prefactor - 1.0).abs() < 1e-12);
    let flat = fit_power_law(&[(1.0, 2.0), (10.0, 2.0), (100.0, 2.0)]).unwrap();
    assert!(flat.exponent.abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noisy: Vec<(f64, f64)> = (0..20)
        .map(|i| {
            let l = 10f64.powf(1.0 + 0.15 * i as f64);
            (l, l.powf(-0.5) * (1.0 + 0.05 * (2.0 * rng.random::<f64>() - 1.0)))
        })
        .collect();
    assert!((fit_power_law(&noisy).unwrap().exponent + 0.5).abs() < 0.05);
    assert!(matches!(fit_power_law(&[(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)]), Err(Error::Domain(_))));
    assert!(matches!(fit_power_law(&[(1.0, 1.0), (2.0, 1.0)]), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_monotone_in_s(lambda in 1.0f64..60.0, s1 in 0.0f64..3.0, ds in 0.0f64..3.0) {
        let m = torus1d(12);
        let op = DenseResolvent::new(&m, &SpatialSet::intervals(&[(0.0, PI)])).unwrap();
        prop_assert!(op.bound(lambda, s1) <= op.bound(lambda, s1 + ds) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_sided_bracket(seed in any::<u64>(), lambda in 1.0f64..30.0, s in 0.0f64..1.0) {
        let m = torus1d(12);
        let omega = SpatialSet::intervals(&[(0.0, PI)]);
        let g = spatial_gramian(&m, &omega).unwrap();
        let cert = bound_certificate(&m, &omega, lambda, s).unwrap();
        let mut rng = common::rng(seed);
        let u = common::random_unit_state(&mut rng, m.dim());
        let value = s * residual_norm(&m, &u, lambda) + g.form(&u.coeffs).max(0.0).sqrt();
        prop_assert!(value >= cert.bound - 1e-9);
        let v = &cert.minimizer;
        let at_min = s * residual_norm(&m, v, lambda) + g.form(&v.coeffs).max(0.0).sqrt();
        prop_assert!(at_min <= 2f64.sqrt() * cert.bound + 1e-9);
    }
}
