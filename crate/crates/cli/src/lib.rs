//! Command-line experiment runner for `hypskew`: reads a JSON experiment
//! config, runs the scan, and writes `report.json`, `report.csv`,
//! `chain.json` and SVG figures.

pub mod config;
pub mod error;
pub mod lemmas;
pub mod run;
pub mod svg;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::CliError;
pub use run::{execute, run, write_artifacts, Outcome, Overrides};
