use std::path::PathBuf;

use thiserror::Error;
use trinoperm_core::gnq::GnqError;
use trinoperm_core::hermite::HermiteError;
use trinoperm_core::lemma_sums::LemmaError;
use trinoperm_core::symbolic::SymbolicError;
use trinoperm_core::trinomial::TrinomialError;
use trinoperm_core::GfError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    CheckFailed = 1,
    Usage = 2,
    Environment = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Field(#[from] GfError),
    #[error("invalid input: {0}")]
    Trinomial(#[from] TrinomialError),
    #[error("{0}")]
    Gnq(#[from] GnqError),
    #[error("{0}")]
    Hermite(#[from] HermiteError),
    #[error("{0}")]
    Lemma(#[from] LemmaError),
    #[error("{0}")]
    Symbolic(#[from] SymbolicError),
    #[error("config file {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Io { .. } | CliError::ThreadPool(_) => ExitStatus::Environment,
            CliError::Field(GfError::Cache(_)) => ExitStatus::Environment,
            _ => ExitStatus::Usage,
        }
    }
}
