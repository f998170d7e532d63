//! Command-line pipelines over the `netform` library.

pub mod commands;
pub mod config;

use thiserror::Error;

pub use commands::run;
pub use config::{Command, RunConfig, KEYS};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration values.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] netform::Error),
}

impl CliError {
    /// 1 for input, I/O and usage problems; 2 for model and estimation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(e) if e.is_input() => 1,
            CliError::Model(_) => 2,
        }
    }
}
