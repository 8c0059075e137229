//! Library backing the `simkv` binary: config parsing, experiment
//! orchestration and the calculator subcommands, kept separate from the
//! argument handling so integration tests can drive them directly.

pub mod config;
mod csv_io;
pub mod experiment;
pub mod theory;

use thiserror::Error;

pub use config::{parse_config, parse_config_str, ConfigError, ModelConfig, RunConfig, ScheduleConfig};
pub use experiment::{default_init, run_experiment, LossPoint, RepFailure, RunResult, DATASET_STREAM};
pub use theory::{
    curie_weiss_fixed_points, theory_report, write_fixed_points_csv, write_theory_csv, TheoryRow,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{failed} of {total} repetitions diverged")]
    Divergence { failed: usize, total: usize },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// Process exit code: 0 success, 2 config error, 3 divergence,
    /// 4 numeric error, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Divergence { .. } => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

/// Worker-count resolution: explicit flag, then the `SIMKV_WORKERS`
/// environment variable, then the pool default (0).
pub fn resolve_workers(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("SIMKV_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}
