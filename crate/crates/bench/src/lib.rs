//! Experiment harness for wave matrix Lindbladization: config ingestion,
//! convergence sweeps, identity checks, the tomography comparison and
//! program-state preparation reports.

pub mod config;
pub mod error;
pub mod prep;
pub mod run;
pub mod tomography;
pub mod verify;

pub use config::{ExperimentConfig, ModeName, OrderingName, SpecConfig};
pub use error::{BenchError, Result};

/// Command-line overrides shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub ordering: Option<OrderingName>,
    pub mode: Option<ModeName>,
    /// Record wall-clock times; off by default so outputs are reproducible.
    pub timing: bool,
}
