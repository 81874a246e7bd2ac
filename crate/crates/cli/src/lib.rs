#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Batch experiment driver for the `schrodobs` library.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod presets;
pub mod run;

pub use config::{CommandName, ExperimentConfig};
pub use error::CliError;
pub use run::{run_experiment, RunOptions, RunReport};
