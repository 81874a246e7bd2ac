//! Experiment configuration: JSON schema, validation and resolution into
//! library objects.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use schrodobs::resolvent::BumpSpec;
use schrodobs::{ModelDescriptor, SpatialSet, SpectralModel, StateCoeffs, TimeSet};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    ModelInfo,
    ObsConstant,
    ObsScan,
    FilteredScan,
    WeakCert,
    AlphaScan,
    Counterexample,
    Cantor,
    Density,
    Egorov,
    Hum,
    Verify,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::ModelInfo => "model-info",
            CommandName::ObsConstant => "obs-constant",
            CommandName::ObsScan => "obs-scan",
            CommandName::FilteredScan => "filtered-scan",
            CommandName::WeakCert => "weak-cert",
            CommandName::AlphaScan => "alpha-scan",
            CommandName::Counterexample => "counterexample",
            CommandName::Cantor => "cantor",
            CommandName::Density => "density",
            CommandName::Egorov => "egorov",
            CommandName::Hum => "hum",
            CommandName::Verify => "verify",
        }
    }
}

/// Top-level configuration file. `params` is parsed against the schema of
/// `command`, so unknown fields are rejected at every level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Value,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn new<P: Serialize>(command: CommandName, params: &P) -> Self {
        ExperimentConfig {
            command,
            out: None,
            seed: None,
            params: serde_json::to_value(params).expect("parameter structs serialize"),
        }
    }

    pub fn typed_params<P: DeserializeOwned>(&self) -> Result<P, CliError> {
        let value = if self.params.is_null() {
            Value::Object(Default::default())
        } else {
            self.params.clone()
        };
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("{} params: {e}", self.command.as_str())))
    }
}

/// Observation set as written in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaSpec {
    Full,
    Cells(Vec<Vec<(f64, f64)>>),
    Factors(Vec<Vec<(f64, f64)>>),
    /// `a < x < b` across the second coordinate of a 2-D model.
    Strip((f64, f64)),
    /// Seeded union of disjoint cells on a 1-D model.
    Random {
        count: usize,
        measure: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl OmegaSpec {
    /// Fills in a missing random seed so the echoed config is reproducible.
    pub fn pin_seed(&mut self, seed: u64) {
        if let OmegaSpec::Random { seed: s @ None, .. } = self {
            *s = Some(seed);
        }
    }

    pub fn resolve(&self, model: &SpectralModel) -> Result<SpatialSet, CliError> {
        let set = match self {
            OmegaSpec::Full => SpatialSet::full(model),
            OmegaSpec::Cells(c) => SpatialSet::Cells(c.clone()),
            OmegaSpec::Factors(f) => SpatialSet::Factors(f.clone()),
            OmegaSpec::Strip((a, b)) => SpatialSet::strip(model, *a, *b)?,
            OmegaSpec::Random { count, measure, seed } => {
                SpatialSet::random_cells(model, *count, *measure, seed.unwrap_or(0))?
            }
        };
        set.validate(model)?;
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorSpec {
    pub depth: u32,
    pub ratio: f64,
    #[serde(default = "unit_interval")]
    pub base: (f64, f64),
}

fn unit_interval() -> (f64, f64) {
    (0.0, 1.0)
}

impl CantorSpec {
    pub fn resolve(&self) -> Result<TimeSet, CliError> {
        if !(self.ratio > 0.0 && self.ratio < 0.5) {
            return Err(CliError::Config(format!("fat Cantor ratio {} outside (0, 1/2)", self.ratio)));
        }
        Ok(TimeSet::fat_cantor(self.depth, self.ratio, self.base)?)
    }
}

/// Time set as written in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeSpec {
    Intervals(Vec<(f64, f64)>),
    FatCantor(CantorSpec),
}

impl TimeSpec {
    pub fn resolve(&self) -> Result<TimeSet, CliError> {
        match self {
            TimeSpec::Intervals(ivs) => Ok(TimeSet::from_intervals(ivs)?),
            TimeSpec::FatCantor(c) => c.resolve(),
        }
    }
}

/// State as written in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Zero,
    /// Unit coefficient on the mode with this index tuple.
    Basis(Vec<i64>),
    /// Interleaved real/imaginary coefficients in mode-table order.
    Coeffs(Vec<f64>),
}

impl StateSpec {
    pub fn resolve(&self, model: &SpectralModel) -> Result<StateCoeffs, CliError> {
        let state = match self {
            StateSpec::Zero => model.zero_state(),
            StateSpec::Basis(index) => model.basis_state(index)?,
            StateSpec::Coeffs(values) => StateCoeffs::from_interleaved(values)?,
        };
        model.check(&state)?;
        Ok(state)
    }
}

pub fn build_model(desc: &ModelDescriptor) -> Result<SpectralModel, CliError> {
    Ok(SpectralModel::build(desc)?)
}

pub fn nonempty<T>(name: &str, v: &[T]) -> Result<(), CliError> {
    if v.is_empty() {
        Err(CliError::Config(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

pub fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {x} must be positive and finite")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelInfoParams {
    pub model: ModelDescriptor,
    /// Random states for the unitarity and group-law probe.
    #[serde(default)]
    pub unitarity_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObsConstantParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    pub time_set: TimeSpec,
    /// Random states compared against Simpson quadrature of the functional.
    #[serde(default)]
    pub oracle_states: usize,
    #[serde(default = "default_oracle_panels")]
    pub oracle_panels: usize,
    /// Also report per-eigenspace visibility.
    #[serde(default)]
    pub visibility: bool,
}

fn default_oracle_panels() -> usize {
    1 << 12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObsScanAxis {
    Cutoffs(Vec<usize>),
    TimeSets(Vec<TimeSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObsScanParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    /// Used by a cutoff scan; ignored by a time-set scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_set: Option<TimeSpec>,
    pub scan: ObsScanAxis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilteredScanParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    #[serde(default)]
    pub s: f64,
    pub deltas: Vec<f64>,
    pub hs: Vec<f64>,
    /// Second window centre used to report the shift-invariance gap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_check: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakCertParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    pub window: (f64, f64),
    pub taus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaScanParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    pub lambdas: Vec<f64>,
    #[serde(default = "default_k0")]
    pub k0: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
}

fn default_k0() -> f64 {
    schrodobs::resolvent::DEFAULT_K0
}

fn default_s_max() -> f64 {
    schrodobs::resolvent::DEFAULT_S_MAX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    pub model: ModelDescriptor,
    pub strip: (f64, f64),
    pub ks: Vec<i64>,
    #[serde(default = "default_k0")]
    pub k0: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    /// Defaults to the bump centred in the complementary arc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<BumpSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSpec {
    Points(Vec<f64>),
    Grid { start: f64, stop: f64, count: usize },
}

impl SampleSpec {
    pub fn resolve(&self) -> Result<Vec<f64>, CliError> {
        match *self {
            SampleSpec::Points(ref p) => {
                nonempty("samples", p)?;
                Ok(p.clone())
            }
            SampleSpec::Grid { start, stop, count } => {
                if count < 2 || !(stop > start) {
                    return Err(CliError::Config("sample grid needs count >= 2 and stop > start".into()));
                }
                let h = (stop - start) / (count - 1) as f64;
                Ok((0..count).map(|i| start + i as f64 * h).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityParams {
    pub time_set: TimeSpec,
    pub n: u32,
    pub samples: SampleSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EgorovParams {
    pub time_set: TimeSpec,
    pub n: u32,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumParams {
    pub model: ModelDescriptor,
    pub omega: OmegaSpec,
    pub time_set: TimeSpec,
    pub horizon: f64,
    pub u0: StateSpec,
    pub u1: StateSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Simpson panel counts per interval for the quadrature route.
    #[serde(default = "default_verify_panels")]
    pub verify_panels: Vec<usize>,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_verify_panels() -> Vec<usize> {
    vec![1 << 12]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    /// Plan file written by `hum`, relative to the working directory.
    pub plan: PathBuf,
    #[serde(default = "default_verify_panels")]
    pub panels: Vec<usize>,
}

pub fn check_panels(panels: &[usize]) -> Result<(), CliError> {
    nonempty("panel list", panels)?;
    match panels.iter().find(|&&p| p < 2 || !p.is_multiple_of(2)) {
        Some(p) => Err(CliError::Config(format!("Simpson panel count {p} must be even and >= 2"))),
        None => Ok(()),
    }
}
