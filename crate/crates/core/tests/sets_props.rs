mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use schrodobs::linalg::eigenvalues;
use schrodobs::sets::fat_cantor_removed;
use schrodobs::{spatial_gramian, ModelDescriptor, SpatialSet, SpectralModel, TimeSet};

fn torus1d(n: usize) -> SpectralModel {
    SpectralModel::build(&ModelDescriptor::torus1d(n)).unwrap()
}

fn time_set_strategy() -> impl Strategy<Value = TimeSet> {
    prop::collection::vec((-5.0f64..5.0, 0.01f64..1.5), 1..6).prop_map(|v| {
        let ivs: Vec<(f64, f64)> = v.into_iter().map(|(a, l)| (a, a + l)).collect();
        TimeSet::from_intervals(&ivs).unwrap()
    })
}

fn omega_strategy() -> impl Strategy<Value = SpatialSet> {
    prop::collection::vec((0.0f64..1.0, 0.05f64..0.9), 1..4).prop_map(|v| {
        // one interval per slot of width 2π/4 keeps the cells disjoint
        let slot = 2.0 * PI / 4.0;
        let ivs: Vec<(f64, f64)> = v
            .iter()
            .enumerate()
            .map(|(i, &(off, frac))| {
                let len = frac * slot * 0.5;
                let a = i as f64 * slot + off * (slot - len);
                (a, a + len)
            })
            .collect();
        SpatialSet::intervals(&ivs)
    })
}

#[test]
fn fat_cantor_measure_matches_constructed_lengths() {
    for depth in 0..=8 {
        for r in [0.1, 0.2, 0.25, 0.3] {
            let e = TimeSet::fat_cantor(depth, r, (0.0, 1.0)).unwrap();
            let summed: f64 = e.intervals().iter().map(|(a, b)| b - a).sum();
            assert!((summed - (1.0 - fat_cantor_removed(depth, r))).abs() < 1e-14);
            assert_eq!(e.intervals().len(), 1 << depth);
        }
    }
    let five = TimeSet::fat_cantor(5, 0.25, (0.0, 1.0)).unwrap();
    assert_eq!(five.measure(), 0.515625);
}

#[test]
fn fat_cantor_chain_is_nested() {
    let chain: Vec<TimeSet> = (0..=6)
        .map(|d| TimeSet::fat_cantor(d, 0.25, (0.0, 1.0)).unwrap())
        .collect();
    for w in chain.windows(2) {
        for &(a, b) in w[1].intervals() {
            assert!(w[0].intervals().iter().any(|&(c, d)| c <= a && b <= d));
        }
    }
}

#[test]
fn exhausted_cantor_rejected() {
    assert!(TimeSet::fat_cantor(2, 0.49, (0.0, 1.0)).is_ok());
    assert!(TimeSet::fat_cantor(40, 0.5, (0.0, 1.0)).is_err());
}

#[test]
fn density_matches_grid_oracle() {
    let e = TimeSet::fat_cantor(2, 0.25, (0.0, 1.0)).unwrap();
    let step = 1e-6;
    for &(n, s) in &[(4u32, 0.0f64), (3, 0.3), (5, 0.5), (2, 0.9)] {
        let half = 0.5f64.powi(n as i32);
        let cells = (2.0 * half / step).round() as usize;
        let hits = (0..cells)
            .filter(|&i| e.contains(s - half + (i as f64 + 0.5) * step))
            .count();
        let oracle = 1.0 - 2f64.powi(n as i32 - 1) * hits as f64 * step;
        assert!((e.density(n, s) - oracle).abs() < 1e-5, "n={n} s={s}");
    }
}

#[test]
fn egorov_points_satisfy_contract() {
    let e = TimeSet::fat_cantor(6, 0.25, (0.0, 1.0)).unwrap();
    let pts = e.egorov_points(9, 0.2).unwrap();
    assert!(!pts.is_empty());
    assert!(pts.iter().all(|&s| e.contains(s) && e.density(9, s) <= 0.2));
    let far = TimeSet::from_intervals(&[(0.0, 1.0), (10.0, 11.0)]).unwrap();
    let pts = far.egorov_points(5, 0.1).unwrap();
    assert!(pts.contains(&0.5) && pts.contains(&10.5));
}

#[test]
fn gramian_example_entries_by_trapezoid() {
    let m = torus1d(4);
    let g = spatial_gramian(&m, &SpatialSet::intervals(&[(0.0, PI)])).unwrap();
    let q = 4096;
    let h = PI / q as f64;
    for (j, a) in m.modes().iter().enumerate() {
        for (k, b) in m.modes().iter().enumerate() {
            let f = |x: f64| m.eigenfunction(&a.index, &[x]) * m.eigenfunction(&b.index, &[x]).conj();
            let mut acc = (f(0.0) + f(PI)) * 0.5;
            for i in 1..q {
                acc += f(i as f64 * h);
            }
            acc *= h;
            assert!((acc - g.matrix()[(j, k)]).norm() < 1e-6, "({j},{k})");
        }
    }
    let p0 = m.position(&[1]).unwrap();
    let p1 = m.position(&[0]).unwrap();
    assert!((g.matrix()[(p0, p1)] - Complex64::new(0.0, 1.0 / PI)).norm() < 1e-15);
}

#[test]
fn torus_gramian_positive_definite_on_corpus() {
    // λ_min decays like a prolate eigenvalue in N|ω|, so the corpus keeps
    // it above roundoff
    let m = torus1d(3);
    let corpus = [
        SpatialSet::intervals(&[(0.0, PI)]),
        SpatialSet::intervals(&[(0.0, 1.0)]),
        SpatialSet::intervals(&[(0.0, PI), (4.0, 5.0)]),
        SpatialSet::random_cells(&m, 50, 0.3, 42).unwrap(),
    ];
    for omega in &corpus {
        let g = spatial_gramian(&m, omega).unwrap();
        assert!(eigenvalues(&g)[0] > 1e-14, "{omega:?}");
    }
}

#[test]
fn random_cells_seeded_and_valid() {
    let m = torus1d(3);
    let a = SpatialSet::random_cells(&m, 50, 0.3, 42).unwrap();
    let b = SpatialSet::random_cells(&m, 50, 0.3, 42).unwrap();
    assert_eq!(a, b);
    assert!((a.measure() - 0.3).abs() < 1e-14);
    a.validate(&m).unwrap();
    assert_ne!(a, SpatialSet::random_cells(&m, 50, 0.3, 43).unwrap());
}

#[test]
fn time_set_json_shape() {
    let e: TimeSet = serde_json::from_str(r#"{"intervals": [[2, 3], [0, 1]]}"#).unwrap();
    assert_eq!(e.intervals(), &[(0.0, 1.0), (2.0, 3.0)]);
    assert!(serde_json::from_str::<TimeSet>(r#"{"intervals": []}"#).is_err());
    assert!(serde_json::from_str::<TimeSet>(r#"{"intervals": [[1, 0]]}"#).is_err());
    let cells: SpatialSet = serde_json::from_str(r#"{"cells": [[[0, 1], [2, 3]]]}"#).unwrap();
    assert_eq!(cells.dimension(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn moment_matches_simpson(e in time_set_strategy(), theta in -30.0f64..30.0) {
        let closed = e.moment(theta);
        let quad: Complex64 = e
            .intervals()
            .iter()
            .map(|&(a, b)| common::simpson(a, b, 1 << 12, |t| Complex64::from_polar(1.0, -theta * t)))
            .sum();
        prop_assert!((closed - quad).norm() <= 1e-9 * closed.norm().max(1e-3), "{closed} vs {quad}");
    }

    #[test]
    fn moment_symmetries(e in time_set_strategy(), theta in -50.0f64..50.0) {
        prop_assert_eq!(e.moment(0.0), Complex64::new(e.measure(), 0.0));
        prop_assert!((e.moment(-theta) - e.moment(theta).conj()).norm() <= 1e-14);
        prop_assert!(e.moment(theta).norm() <= e.measure() * (1.0 + 1e-14));
    }

    #[test]
    fn moment_additive(e in time_set_strategy(), theta in -20.0f64..20.0) {
        let ivs = e.intervals();
        let whole = e.moment(theta);
        let parts: Complex64 = ivs
            .iter()
            .map(|&(a, b)| TimeSet::interval(a, b).unwrap().moment(theta))
            .sum();
        prop_assert!((whole - parts).norm() <= 1e-12);
    }

    #[test]
    fn gramian_sandwich(omega in omega_strategy(), seed in any::<u64>()) {
        let m = torus1d(8);
        let g = spatial_gramian(&m, &omega).unwrap();
        let mut rng = common::rng(seed);
        let u = common::random_state(&mut rng, m.dim());
        let q = g.form(&u.coeffs);
        let n2 = u.l2_norm().powi(2);
        prop_assert!(q >= -1e-12 && q <= n2 + 1e-12);
    }

    #[test]
    fn gramian_additive(omega in omega_strategy()) {
        let m = torus1d(8);
        let whole = spatial_gramian(&m, &omega).unwrap();
        let schrodobs::SpatialSet::Cells(cells) = &omega else { unreachable!() };
        let mut acc = schrodobs::HermitianMatrix::from_real_diagonal(&vec![0.0; m.dim()]);
        for c in cells {
            let part = spatial_gramian(&m, &SpatialSet::intervals(&[c[0]])).unwrap();
            acc = acc.add(&part).unwrap();
        }
        prop_assert!(whole.max_abs_diff(&acc) <= 1e-12);
    }

    #[test]
    fn density_in_unit_interval(depth in 0u32..6, n in 1u32..12, s in -1.0f64..2.0) {
        let e = TimeSet::fat_cantor(depth, 0.25, (0.0, 1.0)).unwrap();
        let f = e.density(n, s);
        prop_assert!((0.0..=1.0).contains(&f));
    }
}
