use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fqg_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    /// 2 for anything the caller can fix, 3 when the numerics gave up.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(fqg_core::Error::RetryExhausted(_) | fqg_core::Error::NumericalIrrep(_)) => 3,
            CliError::Serialize(_) => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}
