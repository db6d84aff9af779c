use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("numeric error: {0}")]
    Numeric(mkdv_core::Error),
}

impl CliError {
    /// 2 config, 3 verification failure, 4 numeric capability.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } | CliError::Write { .. } => 2,
            CliError::Verification(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<mkdv_core::Error> for CliError {
    fn from(e: mkdv_core::Error) -> Self {
        use mkdv_core::Error as E;
        match e {
            E::InvalidParams(_) | E::Precondition(_) | E::NotApplicable(_) => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
