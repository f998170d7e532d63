use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file} row {row}: {msg}")]
    Input { file: String, row: usize, msg: String },
    #[error("nodes must differ, got ({0}, {0})")]
    SameNode(usize),
    #[error("dimension mismatch: network has {network} nodes, firm table has {firms}")]
    DimensionMismatch { network: usize, firms: usize },
    #[error("enumeration limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error("non-finite potential at parameter {0}")]
    NonFinitePotential(String),
    #[error("maximum pseudolikelihood estimate does not exist: {0}")]
    Nonexistence(String),
    #[error("singular information matrix")]
    Singular,
    #[error("not enough draws: {0}")]
    TooFewDraws(String),
    #[error("requested {requested} posterior draws but only {available} are available")]
    NotEnoughDraws { requested: usize, available: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("scenario leaves {0} firms, at least 3 are required")]
    TooFewFirms(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn input(file: &str, row: usize, msg: impl Into<String>) -> Self {
        Error::Input { file: file.to_string(), row, msg: msg.into() }
    }

    /// True for failures reading or validating input files.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Input { .. })
    }
}
