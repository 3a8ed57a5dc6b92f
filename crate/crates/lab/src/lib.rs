//! Experiment runner for `jumpspace`: configs, seeded experiments, CSV and
//! JSON reports, and the enumerating oracles behind `selftest`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod params;
pub mod random;
pub mod report;
pub mod selftest;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::RunError;
pub use experiments::{execute, run, Outcome};
pub use report::ScanReport;
