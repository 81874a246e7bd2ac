//! Named configurations, one per acceptance criterion plus a few extras.

use std::f64::consts::PI;

use schrodobs::ModelDescriptor;

use crate::config::*;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

fn preset<P: serde::Serialize>(name: &'static str, description: &'static str, command: CommandName, params: P) -> Preset {
    Preset {
        name,
        description,
        config: ExperimentConfig::new(command, &params),
    }
}

fn half_circle() -> OmegaSpec {
    OmegaSpec::Cells(vec![vec![(0.0, PI)]])
}

fn cantor(depth: u32) -> TimeSpec {
    TimeSpec::FatCantor(CantorSpec {
        depth,
        ratio: 0.25,
        base: (0.0, 1.0),
    })
}

pub fn all() -> Vec<Preset> {
    vec![
        preset(
            "unitarity-suite",
            "norm preservation and group law on 1000 random states",
            CommandName::ModelInfo,
            ModelInfoParams {
                model: ModelDescriptor::torus1d(16),
                unitarity_trials: 1000,
            },
        ),
        preset(
            "gramian-oracle",
            "closed-form Gramian against Simpson quadrature on 20 random states",
            CommandName::ObsConstant,
            ObsConstantParams {
                model: ModelDescriptor::torus1d(16),
                omega: OmegaSpec::Cells(vec![vec![(0.0, PI)], vec![(4.0, 5.0)]]),
                time_set: cantor(3),
                oracle_states: 20,
                oracle_panels: 1 << 12,
                visibility: false,
            },
        ),
        preset(
            "full-omega-identity",
            "full observation set gives A = |E| I",
            CommandName::ObsConstant,
            ObsConstantParams {
                model: ModelDescriptor::torus1d(8),
                omega: OmegaSpec::Full,
                time_set: TimeSpec::Intervals(vec![(0.0, 0.3), (0.5, 1.2)]),
                oracle_states: 0,
                oracle_panels: 1 << 12,
                visibility: false,
            },
        ),
        preset(
            "hum-acceptance",
            "HUM control from e_0 to e_1 over a fat Cantor time set",
            CommandName::Hum,
            HumParams {
                model: ModelDescriptor::torus1d(32),
                omega: half_circle(),
                time_set: cantor(4),
                horizon: 1.0,
                u0: StateSpec::Basis(vec![0]),
                u1: StateSpec::Basis(vec![1]),
                tol: 1e-10,
                verify_panels: vec![1 << 12],
            },
        ),
        preset(
            "corollary1-torus",
            "s*(lambda) scaling on the circle with a half-circle observation set",
            CommandName::AlphaScan,
            AlphaScanParams {
                model: ModelDescriptor::torus1d(200),
                omega: half_circle(),
                lambdas: vec![100.0, 400.0, 1600.0, 6400.0],
                k0: 0.3,
                s_max: schrodobs::resolvent::DEFAULT_S_MAX,
            },
        ),
        preset(
            "remark2-strip",
            "quasimodes invisible from a strip on the flat torus",
            CommandName::Counterexample,
            CounterexampleParams {
                model: ModelDescriptor::torus2d(64),
                strip: (1.0, 2.0),
                ks: vec![4, 8, 16, 32],
                k0: 0.3,
                s_max: schrodobs::resolvent::DEFAULT_S_MAX,
                chi: None,
            },
        ),
        preset(
            "density-machinery",
            "Egorov points of a depth-5 fat Cantor set",
            CommandName::Egorov,
            EgorovParams {
                time_set: cantor(5),
                n: 9,
                eps: 0.2,
            },
        ),
        preset(
            "visibility-seed42",
            "eigenspace visibility of a seeded 50-cell observation set",
            CommandName::ObsConstant,
            ObsConstantParams {
                model: ModelDescriptor::torus1d(20),
                omega: OmegaSpec::Random {
                    count: 50,
                    measure: 0.3,
                    seed: Some(42),
                },
                time_set: TimeSpec::Intervals(vec![(0.0, 1.0)]),
                oracle_states: 0,
                oracle_panels: 1 << 12,
                visibility: true,
            },
        ),
        preset(
            "band-uniformity",
            "band-filtered constants across window widths with a shift check",
            CommandName::FilteredScan,
            FilteredScanParams {
                model: ModelDescriptor::torus1d(64),
                omega: OmegaSpec::Cells(vec![vec![(0.0, 1.0)]]),
                s: 0.0,
                deltas: vec![0.4, 0.2, 0.1],
                hs: vec![1.0 / 24.0],
                shift_check: Some(17.3),
            },
        ),
        preset(
            "monotone-chain",
            "observability along a nested fat Cantor chain",
            CommandName::ObsScan,
            ObsScanParams {
                model: ModelDescriptor::torus1d(6),
                omega: half_circle(),
                time_set: None,
                scan: ObsScanAxis::TimeSets((0..=5).map(cantor).collect()),
            },
        ),
        preset(
            "fat-cantor",
            "intervals and measure of a depth-5 fat Cantor set",
            CommandName::Cantor,
            CantorSpec {
                depth: 5,
                ratio: 0.25,
                base: (0.0, 1.0),
            },
        ),
        preset(
            "density-profile",
            "density function f_4 of a depth-3 fat Cantor set",
            CommandName::Density,
            DensityParams {
                time_set: cantor(3),
                n: 4,
                samples: SampleSpec::Grid {
                    start: 0.0,
                    stop: 1.0,
                    count: 401,
                },
            },
        ),
        preset(
            "weak-window",
            "weak observability certificates on a unit window",
            CommandName::WeakCert,
            WeakCertParams {
                model: ModelDescriptor::torus1d(8),
                omega: half_circle(),
                window: (0.0, 1.0),
                taus: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            },
        ),
        preset(
            "cutoff-scan",
            "observability constant as the cutoff grows",
            CommandName::ObsScan,
            ObsScanParams {
                model: ModelDescriptor::torus1d(1),
                omega: half_circle(),
                time_set: Some(TimeSpec::Intervals(vec![(0.0, 1.0)])),
                scan: ObsScanAxis::Cutoffs((1..=6).collect()),
            },
        ),
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}
