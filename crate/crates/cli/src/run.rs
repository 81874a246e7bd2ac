//! Config validation and command dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use schrodobs::hum::{hum_solve, verify_control, ControlPlan, HumOutcome};
use schrodobs::linalg::eigenvalues;
use schrodobs::observability::{
    brute_force_functional_from, eigenspace_visibility, filtered_obs_constant_from, obs_constant, obs_gramian_from,
    weak_obs_certificate_from, FilteredStatus, ObservabilityStatus,
};
use schrodobs::resolvent::{
    alpha_scan, fit_power_law, strip_quasimode, strip_quasimode_state, AlphaScanRow, BumpSpec, CertificateOperator,
    DenseResolvent, ScanStatus, StripFibers, TRUNCATION_FACTOR,
};
use schrodobs::sets::fat_cantor_removed;
use schrodobs::{spatial_gramian, Family, HermitianMatrix, SpatialSet, SpectralModel, StateCoeffs, TimeSet};

use crate::config::*;
use crate::error::CliError;
use crate::output::{canonical_json, sha256_hex, to_json_pretty, versions, Bundle, Table};
use crate::plot::{emit_plot_script, PlotKind};

/// Smallest visibility counted as strictly positive.
pub const VISIBILITY_FLOOR: f64 = 1e-12;

/// Overrides taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub status: String,
    pub exit_code: i32,
    pub summary: Value,
}

/// A validated config: the echo-ready effective config and the resolved job.
pub struct Prepared {
    pub config: ExperimentConfig,
    job: Job,
}

enum Job {
    ModelInfo {
        model: SpectralModel,
        trials: usize,
        seed: u64,
    },
    ObsConstant {
        model: SpectralModel,
        omega: SpatialSet,
        full: bool,
        e: TimeSet,
        oracle_states: usize,
        oracle_panels: usize,
        visibility: bool,
        seed: u64,
    },
    ObsScan {
        label: &'static str,
        points: Vec<(f64, SpectralModel, SpatialSet, TimeSet)>,
    },
    FilteredScan {
        model: SpectralModel,
        omega: SpatialSet,
        s: f64,
        deltas: Vec<f64>,
        hs: Vec<f64>,
        shift_check: Option<f64>,
    },
    WeakCert {
        model: SpectralModel,
        omega: SpatialSet,
        window: (f64, f64),
        taus: Vec<f64>,
    },
    AlphaScan {
        model: SpectralModel,
        omega: SpatialSet,
        strip: Option<(f64, f64)>,
        lambdas: Vec<f64>,
        k0: f64,
        s_max: f64,
    },
    Counterexample {
        model: SpectralModel,
        strip: (f64, f64),
        ks: Vec<i64>,
        k0: f64,
        s_max: f64,
        chi: BumpSpec,
    },
    Cantor {
        spec: CantorSpec,
        e: TimeSet,
    },
    Density {
        e: TimeSet,
        n: u32,
        samples: Vec<f64>,
    },
    Egorov {
        e: TimeSet,
        n: u32,
        eps: f64,
    },
    Hum {
        model: SpectralModel,
        omega: SpatialSet,
        e: TimeSet,
        horizon: f64,
        u0: StateCoeffs,
        u1: StateCoeffs,
        tol: f64,
        panels: Vec<usize>,
    },
    Verify {
        model: SpectralModel,
        plan: Box<ControlPlan>,
        panels: Vec<usize>,
    },
}

/// Result of one command before it is wrapped into the summary.
struct Outcome {
    status: String,
    ok: bool,
    results: Value,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome {
            status: "ok".into(),
            ok: true,
            results,
        }
    }

    fn from_status(status: &str, results: Value) -> Self {
        Outcome {
            status: status.to_string(),
            ok: status == "ok",
            results,
        }
    }
}

fn label<T: serde::Serialize>(status: T) -> String {
    serde_json::to_value(status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn omega_for(spec: &OmegaSpec, seed: u64, model: &SpectralModel) -> Result<(OmegaSpec, SpatialSet), CliError> {
    let mut spec = spec.clone();
    spec.pin_seed(seed);
    let set = spec.resolve(model)?;
    Ok((spec, set))
}

fn echo<P: serde::Serialize>(cfg: &ExperimentConfig, seed: u64, params: &P) -> ExperimentConfig {
    let mut out = ExperimentConfig::new(cfg.command, params);
    out.seed = Some(seed);
    out
}

/// Parses and validates a config. No numerical work beyond building the
/// model and resolving sets happens here.
pub fn prepare(cfg: &ExperimentConfig, seed_override: Option<u64>) -> Result<Prepared, CliError> {
    let seed = seed_override.or(cfg.seed).unwrap_or(0);
    let (params_echo, job): (ExperimentConfig, Job) = match cfg.command {
        CommandName::ModelInfo => {
            let p: ModelInfoParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            (
                echo(cfg, seed, &p),
                Job::ModelInfo {
                    model,
                    trials: p.unitarity_trials,
                    seed,
                },
            )
        }
        CommandName::ObsConstant => {
            let mut p: ObsConstantParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            let (spec, omega) = omega_for(&p.omega, seed, &model)?;
            p.omega = spec;
            let e = p.time_set.resolve()?;
            if p.oracle_states > 0 {
                check_panels(&[p.oracle_panels])?;
            }
            let job = Job::ObsConstant {
                model,
                omega,
                full: p.omega == OmegaSpec::Full,
                e,
                oracle_states: p.oracle_states,
                oracle_panels: p.oracle_panels,
                visibility: p.visibility,
                seed,
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::ObsScan => {
            let mut p: ObsScanParams = cfg.typed_params()?;
            let base = build_model(&p.model)?;
            let (spec, base_omega) = omega_for(&p.omega, seed, &base)?;
            p.omega = spec;
            let (label, points) = match &p.scan {
                ObsScanAxis::Cutoffs(cutoffs) => {
                    nonempty("scan.cutoffs", cutoffs)?;
                    let e = p
                        .time_set
                        .as_ref()
                        .ok_or_else(|| CliError::Config("a cutoff scan needs time_set".into()))?
                        .resolve()?;
                    let mut pts = Vec::new();
                    for &n in cutoffs {
                        let mut desc = p.model.clone();
                        desc.cutoff = n;
                        let model = build_model(&desc)?;
                        let omega = p.omega.resolve(&model)?;
                        pts.push((n as f64, model, omega, e.clone()));
                    }
                    ("cutoff", pts)
                }
                ObsScanAxis::TimeSets(sets) => {
                    nonempty("scan.time_sets", sets)?;
                    let mut pts = Vec::new();
                    for (i, t) in sets.iter().enumerate() {
                        pts.push((i as f64, base.clone(), base_omega.clone(), t.resolve()?));
                    }
                    ("time_set_index", pts)
                }
            };
            (echo(cfg, seed, &p), Job::ObsScan { label, points })
        }
        CommandName::FilteredScan => {
            let mut p: FilteredScanParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            let (spec, omega) = omega_for(&p.omega, seed, &model)?;
            p.omega = spec;
            nonempty("deltas", &p.deltas)?;
            nonempty("hs", &p.hs)?;
            for &d in &p.deltas {
                positive("delta", d)?;
            }
            for &h in &p.hs {
                positive("h", h)?;
            }
            if !p.s.is_finite() || p.shift_check.is_some_and(|c| !c.is_finite()) {
                return Err(CliError::Config("window centres must be finite".into()));
            }
            let job = Job::FilteredScan {
                model,
                omega,
                s: p.s,
                deltas: p.deltas.clone(),
                hs: p.hs.clone(),
                shift_check: p.shift_check,
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::WeakCert => {
            let mut p: WeakCertParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            let (spec, omega) = omega_for(&p.omega, seed, &model)?;
            p.omega = spec;
            nonempty("taus", &p.taus)?;
            for &t in &p.taus {
                positive("tau", t)?;
            }
            if !(p.window.1 > p.window.0) {
                return Err(CliError::Config("window must have positive length".into()));
            }
            let job = Job::WeakCert {
                model,
                omega,
                window: p.window,
                taus: p.taus.clone(),
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::AlphaScan => {
            let mut p: AlphaScanParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            let (spec, omega) = omega_for(&p.omega, seed, &model)?;
            p.omega = spec;
            nonempty("lambdas", &p.lambdas)?;
            if let Some(l) = p.lambdas.iter().find(|&&l| !(l >= 1.0 && l.is_finite())) {
                return Err(CliError::Config(format!("lambda = {l} must be >= 1")));
            }
            if !(p.k0 > 0.0 && p.k0 < 1.0) {
                return Err(CliError::Config(format!("k0 = {} outside (0, 1)", p.k0)));
            }
            positive("s_max", p.s_max)?;
            let strip = match p.omega {
                OmegaSpec::Strip(ab) if model.family() == Family::Torus2d => Some(ab),
                _ => None,
            };
            let job = Job::AlphaScan {
                model,
                omega,
                strip,
                lambdas: p.lambdas.clone(),
                k0: p.k0,
                s_max: p.s_max,
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::Counterexample => {
            let mut p: CounterexampleParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            if model.family() != Family::Torus2d {
                return Err(CliError::Config("counterexample needs a torus2d model".into()));
            }
            nonempty("ks", &p.ks)?;
            if !(p.k0 > 0.0 && p.k0 < 1.0) {
                return Err(CliError::Config(format!("k0 = {} outside (0, 1)", p.k0)));
            }
            positive("s_max", p.s_max)?;
            SpatialSet::strip(&model, p.strip.0, p.strip.1)?.validate(&model)?;
            let chi = p
                .chi
                .unwrap_or_else(|| BumpSpec::default_for_strip(p.strip, model.axes()[0].length));
            for &k in &p.ks {
                strip_quasimode_state(&model, p.strip, &chi, k)?;
            }
            p.chi = Some(chi);
            let job = Job::Counterexample {
                model,
                strip: p.strip,
                ks: p.ks.clone(),
                k0: p.k0,
                s_max: p.s_max,
                chi,
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::Cantor => {
            let p: CantorSpec = cfg.typed_params()?;
            let e = p.resolve()?;
            (echo(cfg, seed, &p), Job::Cantor { spec: p, e })
        }
        CommandName::Density => {
            let p: DensityParams = cfg.typed_params()?;
            let e = p.time_set.resolve()?;
            let samples = p.samples.resolve()?;
            if samples.iter().any(|s| !s.is_finite()) {
                return Err(CliError::Config("density samples must be finite".into()));
            }
            (echo(cfg, seed, &p), Job::Density { e, n: p.n, samples })
        }
        CommandName::Egorov => {
            let p: EgorovParams = cfg.typed_params()?;
            let e = p.time_set.resolve()?;
            if !(p.eps > 0.0 && p.eps < 1.0) {
                return Err(CliError::Config(format!("eps = {} outside (0, 1)", p.eps)));
            }
            (echo(cfg, seed, &p), Job::Egorov { e, n: p.n, eps: p.eps })
        }
        CommandName::Hum => {
            let mut p: HumParams = cfg.typed_params()?;
            let model = build_model(&p.model)?;
            let (spec, omega) = omega_for(&p.omega, seed, &model)?;
            p.omega = spec;
            let e = p.time_set.resolve()?;
            positive("horizon", p.horizon)?;
            if !e.is_within(0.0, p.horizon) {
                return Err(CliError::Config(format!("time set must lie in [0, {}]", p.horizon)));
            }
            positive("tol", p.tol)?;
            check_panels(&p.verify_panels)?;
            let job = Job::Hum {
                u0: p.u0.resolve(&model)?,
                u1: p.u1.resolve(&model)?,
                model,
                omega,
                e,
                horizon: p.horizon,
                tol: p.tol,
                panels: p.verify_panels.clone(),
            };
            (echo(cfg, seed, &p), job)
        }
        CommandName::Verify => {
            let p: VerifyParams = cfg.typed_params()?;
            check_panels(&p.panels)?;
            let text = std::fs::read_to_string(&p.plan).map_err(|e| CliError::Io(format!("{}: {e}", p.plan.display())))?;
            let plan: ControlPlan = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: not a control plan: {e}", p.plan.display())))?;
            let model = build_model(&plan.model)?;
            for s in [&plan.u0, &plan.u1, &plan.phi0] {
                model.check(s)?;
            }
            let job = Job::Verify {
                model,
                plan: Box::new(plan),
                panels: p.panels.clone(),
            };
            (echo(cfg, seed, &p), job)
        }
    };
    Ok(Prepared {
        config: params_echo,
        job,
    })
}

/// Default bundle location when neither the flag nor the config names one.
pub fn default_out_dir(command: CommandName) -> PathBuf {
    Path::new("out").join(command.as_str())
}

/// Validates, runs and writes the bundle: `config.json`, command outputs
/// and `summary.json`.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let prepared = prepare(cfg, opts.seed)?;
    let out_dir = opts
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| default_out_dir(cfg.command));
    let mut bundle = Bundle::create(&out_dir)?;
    bundle.write_json("config.json", &prepared.config)?;
    let outcome = execute(prepared.job, &mut bundle)?;
    let summary = json!({
        "command": cfg.command.as_str(),
        "config_hash": sha256_hex(&canonical_json(&prepared.config)),
        "outputs": bundle.files(),
        "results": outcome.results,
        "status": outcome.status,
        "versions": versions(),
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    bundle.write_text("summary.json", &to_json_pretty(&summary))?;
    Ok(RunReport {
        out_dir,
        exit_code: if outcome.ok { 0 } else { 3 },
        status: outcome.status,
        summary,
    })
}

fn execute(job: Job, bundle: &mut Bundle) -> Result<Outcome, CliError> {
    match job {
        Job::ModelInfo { model, trials, seed } => model_info(&model, trials, seed, bundle),
        Job::ObsConstant {
            model,
            omega,
            full,
            e,
            oracle_states,
            oracle_panels,
            visibility,
            seed,
        } => obs_constant_cmd(
            &model,
            &omega,
            full,
            &e,
            (oracle_states, oracle_panels, seed),
            visibility,
            bundle,
        ),
        Job::ObsScan { label, points } => obs_scan(label, &points, bundle),
        Job::FilteredScan {
            model,
            omega,
            s,
            deltas,
            hs,
            shift_check,
        } => filtered_scan(&model, &omega, s, &deltas, &hs, shift_check, bundle),
        Job::WeakCert {
            model,
            omega,
            window,
            taus,
        } => weak_cert(&model, &omega, window, &taus, bundle),
        Job::AlphaScan {
            model,
            omega,
            strip,
            lambdas,
            k0,
            s_max,
        } => match strip {
            Some(ab) => alpha_scan_cmd(&StripFibers::new(&model, ab)?, "strip-fibers", &lambdas, k0, s_max, bundle),
            None => alpha_scan_cmd(&DenseResolvent::new(&model, &omega)?, "dense", &lambdas, k0, s_max, bundle),
        },
        Job::Counterexample {
            model,
            strip,
            ks,
            k0,
            s_max,
            chi,
        } => counterexample(&model, strip, &ks, k0, s_max, &chi, bundle),
        Job::Cantor { spec, e } => cantor(&spec, &e, bundle),
        Job::Density { e, n, samples } => density(&e, n, &samples, bundle),
        Job::Egorov { e, n, eps } => egorov(&e, n, eps, bundle),
        Job::Hum {
            model,
            omega,
            e,
            horizon,
            u0,
            u1,
            tol,
            panels,
        } => hum(&model, &omega, &e, horizon, (&u0, &u1), tol, &panels, bundle),
        Job::Verify { model, plan, panels } => verify(&model, &plan, &panels, bundle),
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateCoeffs {
    StateCoeffs::new(
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
            .collect(),
    )
}

fn model_info(model: &SpectralModel, trials: usize, seed: u64, bundle: &mut Bundle) -> Result<Outcome, CliError> {
    let mut buf = Vec::new();
    model.write_mode_table(&mut buf)?;
    bundle.write_text("modes.csv", &String::from_utf8(buf).expect("ASCII table"))?;
    let mut results = json!({
        "family": model.family().to_string(),
        "cutoff": model.cutoff(),
        "dimension": model.dim(),
        "lambda_max": model.lambda_max(),
        "domain_measure": model.domain_measure(),
    });
    if trials > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut norm_dev, mut group_dev) = (0.0f64, 0.0f64);
        for _ in 0..trials {
            let u = random_state(&mut rng, model.dim());
            let t: f64 = rng.random_range(-10.0..10.0);
            let s: f64 = rng.random_range(-10.0..10.0);
            let norm = u.l2_norm();
            let ut = model.propagate(&u, t)?;
            norm_dev = norm_dev.max((ut.l2_norm() - norm).abs() / norm);
            let composed = model.propagate(&ut, s)?;
            let direct = model.propagate(&u, t + s)?;
            group_dev = group_dev.max((&composed.coeffs - &direct.coeffs).norm() / norm);
        }
        results["unitarity"] = json!({
            "trials": trials,
            "max_norm_deviation": norm_dev,
            "max_group_law_deviation": group_dev,
        });
    }
    Ok(Outcome::ok(results))
}

fn obs_constant_cmd(
    model: &SpectralModel,
    omega: &SpatialSet,
    full: bool,
    e: &TimeSet,
    oracle: (usize, usize, u64),
    visibility: bool,
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let report = obs_constant(model, omega, e)?;
    bundle.write_json("report.json", &report)?;
    let mut results = json!({
        "status": label(report.status),
        "lambda_min": report.lambda_min,
        "lambda_max": report.lambda_max,
        "obs_constant": report.obs_constant,
        "time_measure": report.time_measure,
        "omega_measure": report.omega_measure,
        "dimension": report.dimension,
    });
    let (states, panels, seed) = oracle;
    if full || states > 0 {
        let g = spatial_gramian(model, omega)?;
        let a = obs_gramian_from(model, &g, e)?;
        if full {
            let scaled = HermitianMatrix::identity(model.dim()).scale(e.measure());
            results["full_omega_deviation"] = json!(a.max_abs_diff(&scaled));
        }
        if states > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let us: Vec<StateCoeffs> = (0..states).map(|_| random_state(&mut rng, model.dim())).collect();
            let gaps = us
                .par_iter()
                .map(|u| {
                    let quad = brute_force_functional_from(model, &g, e, u, panels)?;
                    Ok((a.form(&u.coeffs) - quad).abs() / quad.abs())
                })
                .collect::<Result<Vec<f64>, schrodobs::Error>>()?;
            results["oracle"] = json!({
                "states": states,
                "panels": panels,
                "max_relative_gap": gaps.iter().cloned().fold(0.0, f64::max),
            });
        }
    }
    if visibility {
        let vis = eigenspace_visibility(model, omega)?;
        let mut table = Table::new(&["eigenvalue", "visibility"]);
        for &(l, v) in &vis {
            table.push(vec![l.into(), v.into()]);
        }
        bundle.write_table("visibility.csv", &table)?;
        let min = vis.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        results["visibility"] = json!({
            "min_visibility": min,
            "floor": VISIBILITY_FLOOR,
            "all_visible": min > VISIBILITY_FLOOR,
        });
    }
    let ok = report.status == ObservabilityStatus::Observable;
    Ok(Outcome {
        status: label(report.status),
        ok,
        results,
    })
}

fn monotone(values: &[f64], increasing: bool) -> bool {
    values.windows(2).all(|w| {
        let slack = 1e-12 * w[0].abs().max(w[1].abs()).max(1.0);
        if increasing {
            w[1] >= w[0] - slack
        } else {
            w[1] <= w[0] + slack
        }
    })
}

fn obs_scan(
    axis: &str,
    points: &[(f64, SpectralModel, SpatialSet, TimeSet)],
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let reports = points
        .par_iter()
        .map(|(_, model, omega, e)| obs_constant(model, omega, e))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["param", "lambda_min", "C", "status", "time_measure"]);
    for ((param, ..), r) in points.iter().zip(&reports) {
        table.push(vec![
            (*param).into(),
            r.lambda_min.into(),
            r.obs_constant.into(),
            label(r.status).as_str().into(),
            r.time_measure.into(),
        ]);
    }
    let csv = bundle.write_table("obs_scan.csv", &table)?;
    bundle.record(&emit_plot_script(&csv, PlotKind::ObsScan)?);
    let lmins: Vec<f64> = reports.iter().map(|r| r.lambda_min).collect();
    let degenerate = reports
        .iter()
        .find(|r| r.status != ObservabilityStatus::Observable)
        .map(|r| label(r.status));
    let results = json!({
        "axis": axis,
        "rows": reports.len(),
        "lambda_min": lmins,
        "lambda_min_nondecreasing": monotone(&lmins, true),
        "lambda_min_nonincreasing": monotone(&lmins, false),
    });
    Ok(Outcome::from_status(degenerate.as_deref().unwrap_or("ok"), results))
}

fn filtered_scan(
    model: &SpectralModel,
    omega: &SpatialSet,
    s: f64,
    deltas: &[f64],
    hs: &[f64],
    shift_check: Option<f64>,
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let g = spatial_gramian(model, omega)?;
    let grid: Vec<(f64, f64)> = hs.iter().flat_map(|&h| deltas.iter().map(move |&d| (h, d))).collect();
    let rows = grid
        .par_iter()
        .map(|&(h, d)| {
            let base = filtered_obs_constant_from(model, &g, s, d, h)?;
            let shifted = match shift_check {
                Some(c) => Some(filtered_obs_constant_from(model, &g, c, d, h)?),
                None => None,
            };
            Ok((base, shifted))
        })
        .collect::<Result<Vec<_>, schrodobs::Error>>()?;
    let mut table = Table::new(&[
        "h",
        "delta",
        "band_size",
        "lambda_min",
        "C",
        "status",
        "C_shifted",
        "shift_gap",
    ]);
    let mut max_shift_gap = 0.0f64;
    let mut first_bad = None;
    for (f, shifted) in &rows {
        let c_shift = shifted.as_ref().and_then(|x| x.constant);
        let gap = match (f.constant, c_shift) {
            (Some(a), Some(b)) => Some((a - b).abs() / a),
            _ => None,
        };
        if let Some(g) = gap {
            max_shift_gap = max_shift_gap.max(g);
        }
        if f.status != FilteredStatus::Ok && first_bad.is_none() {
            first_bad = Some(label(f.status));
        }
        table.push(vec![
            f.h.into(),
            f.delta.into(),
            f.band_size.into(),
            f.lambda_min.into(),
            f.constant.into(),
            label(f.status).as_str().into(),
            c_shift.into(),
            gap.into(),
        ]);
    }
    bundle.write_table("filtered_scan.csv", &table)?;
    let per_h: Vec<Value> = hs
        .iter()
        .map(|&h| {
            let cs: Vec<f64> = rows.iter().filter(|r| r.0.h == h).filter_map(|r| r.0.constant).collect();
            let hi = cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = cs.iter().cloned().fold(f64::INFINITY, f64::min);
            json!({
                "h": h,
                "band_size": rows.iter().find(|r| r.0.h == h).map(|r| r.0.band_size),
                "constants": cs,
                "spread": if cs.is_empty() { None } else { Some(hi / lo) },
            })
        })
        .collect();
    let mut results = json!({ "per_h": per_h });
    if shift_check.is_some() {
        results["shift_check"] = json!(shift_check);
        results["max_shift_gap"] = json!(max_shift_gap);
    }
    Ok(Outcome::from_status(first_bad.as_deref().unwrap_or("ok"), results))
}

fn weak_cert(
    model: &SpectralModel,
    omega: &SpatialSet,
    window: (f64, f64),
    taus: &[f64],
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let g = spatial_gramian(model, omega)?;
    let certs = taus
        .par_iter()
        .map(|&t| weak_obs_certificate_from(model, &g, window, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["tau", "mu", "constant", "remainder_constant"]);
    for c in &certs {
        table.push(vec![c.tau.into(), c.mu.into(), c.constant.into(), c.remainder_constant.into()]);
    }
    bundle.write_table("weak_cert.csv", &table)?;
    let degenerate = certs.iter().any(|c| !(c.mu > 0.0));
    let results = json!({ "certificates": certs });
    Ok(Outcome::from_status(if degenerate { "degenerate" } else { "ok" }, results))
}

fn alpha_scan_cmd<O: CertificateOperator>(
    op: &O,
    operator: &str,
    lambdas: &[f64],
    k0: f64,
    s_max: f64,
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let rows: Vec<AlphaScanRow> = alpha_scan(op, lambdas, k0, s_max)?;
    let mut table = Table::new(&[
        "lambda",
        "s_star",
        "status",
        "bound_at_s_star",
        "truncation_margin",
        "truncation",
    ]);
    for r in &rows {
        let trunc = if r.truncation_margin >= TRUNCATION_FACTOR {
            "adequate"
        } else {
            "inadequate"
        };
        table.push(vec![
            r.lambda.into(),
            r.s_star.into(),
            label(r.status).as_str().into(),
            r.bound_at_s_star.into(),
            r.truncation_margin.into(),
            trunc.into(),
        ]);
    }
    let csv = bundle.write_table("alpha_scan.csv", &table)?;
    bundle.record(&emit_plot_script(&csv, PlotKind::AlphaScan)?);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.s_star.filter(|&s| s > 0.0).map(|s| (r.lambda, s)))
        .collect();
    let fit = match fit_power_law(&pts) {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let unreachable = rows.iter().any(|r| r.status == ScanStatus::Unreachable);
    let results = json!({
        "operator": operator,
        "k0": k0,
        "s_max": s_max,
        "rows": rows,
        "fit": fit,
    });
    Ok(Outcome::from_status(if unreachable { "unreachable" } else { "ok" }, results))
}

fn counterexample(
    model: &SpectralModel,
    strip: (f64, f64),
    ks: &[i64],
    k0: f64,
    s_max: f64,
    chi: &BumpSpec,
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    let fibers = StripFibers::new(model, strip)?;
    let reports = ks
        .par_iter()
        .map(|&k| strip_quasimode(model, strip, chi, k, k0))
        .collect::<Result<Vec<_>, _>>()?;
    let scan_lambdas: Vec<f64> = reports.iter().map(|r| r.lambda).filter(|&l| l >= 1.0).collect();
    let scan = alpha_scan(&fibers, &scan_lambdas, k0, s_max)?;
    let mut entries = Vec::new();
    let mut all_above = true;
    let mut unreachable = false;
    for r in &reports {
        let row = scan.iter().find(|row| row.lambda == r.lambda);
        let floor = k0 * r.norm / r.resolvent_residual;
        let s_star = row.and_then(|row| row.s_star);
        let above = s_star.map(|s| s >= floor - 1e-6);
        if row.is_some_and(|row| row.status == ScanStatus::Unreachable) {
            unreachable = true;
        }
        if above == Some(false) {
            all_above = false;
        }
        let mut v = json!(r);
        v["s_star"] = json!(s_star);
        v["s_star_floor"] = json!(floor);
        v["s_star_above_floor"] = json!(above);
        entries.push(v);
    }
    bundle.write_json(
        "quasimodes.json",
        &json!({ "chi": chi, "strip": strip, "k0": k0, "reports": entries }),
    )?;
    let ratios: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let results = json!({
        "ks": ks,
        "ratio_relative_spread": hi / lo - 1.0,
        "max_omega_norm": reports.iter().map(|r| r.omega_norm).fold(0.0, f64::max),
        "max_chi_tail": reports.iter().map(|r| r.chi_tail).fold(0.0, f64::max),
        "all_s_star_above_floor": all_above,
    });
    Ok(Outcome::from_status(if unreachable { "unreachable" } else { "ok" }, results))
}

fn cantor(spec: &CantorSpec, e: &TimeSet, bundle: &mut Bundle) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["start", "end"]);
    for &(a, b) in e.intervals() {
        table.push(vec![a.into(), b.into()]);
    }
    bundle.write_table("intervals.csv", &table)?;
    let len = spec.base.1 - spec.base.0;
    Ok(Outcome::ok(json!({
        "intervals": e.intervals().len(),
        "measure": e.measure(),
        "closed_form_measure": len * (1.0 - fat_cantor_removed(spec.depth, spec.ratio)),
    })))
}

fn density(e: &TimeSet, n: u32, samples: &[f64], bundle: &mut Bundle) -> Result<Outcome, CliError> {
    let profile = e.density_profile(n, samples)?;
    let mut buf = Vec::new();
    profile.write_csv(&mut buf)?;
    let csv = bundle.write_text("density.csv", &String::from_utf8(buf).expect("ASCII table"))?;
    bundle.record(&emit_plot_script(&csv, PlotKind::Density)?);
    let values: Vec<f64> = profile.samples.iter().map(|p| p.1).collect();
    Ok(Outcome::ok(json!({
        "n": n,
        "samples": values.len(),
        "min": values.iter().cloned().fold(f64::INFINITY, f64::min),
        "max": values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    })))
}

fn egorov(e: &TimeSet, n: u32, eps: f64, bundle: &mut Bundle) -> Result<Outcome, CliError> {
    let pts = e.egorov_points(n, eps)?;
    let mut table = Table::new(&["s", "f_n"]);
    let mut max_density = 0.0f64;
    for &s in &pts {
        let f = e.density(n, s);
        max_density = max_density.max(f);
        table.push(vec![s.into(), f.into()]);
    }
    bundle.write_table("egorov.csv", &table)?;
    Ok(Outcome::ok(json!({
        "n": n,
        "eps": eps,
        "count": pts.len(),
        "max_density": if pts.is_empty() { None } else { Some(max_density) },
        "time_measure": e.measure(),
    })))
}

#[allow(clippy::too_many_arguments)]
fn hum(
    model: &SpectralModel,
    omega: &SpatialSet,
    e: &TimeSet,
    horizon: f64,
    (u0, u1): (&StateCoeffs, &StateCoeffs),
    tol: f64,
    panels: &[usize],
    bundle: &mut Bundle,
) -> Result<Outcome, CliError> {
    match hum_solve(model, omega, e, horizon, u0, u1, tol)? {
        HumOutcome::NotControllable { lambda_min, lambda_max } => {
            let results = json!({ "lambda_min": lambda_min, "lambda_max": lambda_max });
            bundle.write_json("outcome.json", &results)?;
            Ok(Outcome::from_status("not-controllable", results))
        }
        HumOutcome::Controlled(plan) => {
            bundle.write_json("plan.json", &plan)?;
            let verification = verification_table(model, &plan, panels, bundle)?;
            let results = json!({
                "cost": plan.cost,
                "iterations": plan.iterations,
                "residual": plan.residual,
                "converged": plan.converged,
                "exceeded_dimension_bound": plan.exceeded_dimension_bound,
                "lambda_min": plan.lambda_min,
                "lambda_max": plan.lambda_max,
                "kappa": plan.kappa,
                "verification": verification,
            });
            Ok(Outcome::from_status(if plan.converged { "ok" } else { "not-converged" }, results))
        }
    }
}

fn verification_table(
    model: &SpectralModel,
    plan: &ControlPlan,
    panels: &[usize],
    bundle: &mut Bundle,
) -> Result<Value, CliError> {
    let checks = panels
        .par_iter()
        .map(|&p| verify_control(model, plan, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["panels", "closed_form_error", "quadrature_error"]);
    for c in &checks {
        table.push(vec![c.panels.into(), c.closed_form_error.into(), c.quadrature_error.into()]);
    }
    bundle.write_table("verification.csv", &table)?;
    Ok(json!(checks))
}

fn verify(model: &SpectralModel, plan: &ControlPlan, panels: &[usize], bundle: &mut Bundle) -> Result<Outcome, CliError> {
    let verification = verification_table(model, plan, panels, bundle)?;
    // recompute the Gramian extremes as a consistency check on the stored plan
    let a = obs_gramian_from(model, &spatial_gramian(model, &plan.omega)?, &plan.time_set)?;
    let eig = eigenvalues(&a);
    Ok(Outcome::ok(json!({
        "cost": plan.cost,
        "verification": verification,
        "lambda_min": eig[0],
        "lambda_max": eig[eig.len() - 1],
    })))
}
