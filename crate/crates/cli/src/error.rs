use std::path::PathBuf;

use hypskew::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{operation}: {source}")]
    Numeric {
        operation: &'static str,
        #[source]
        source: GeomError,
    },

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input or an unusable output location, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numeric { .. } | CliError::ChecksFailed(_) => 3,
        }
    }

    pub(crate) fn numeric(operation: &'static str) -> impl FnOnce(GeomError) -> CliError {
        move |source| CliError::Numeric { operation, source }
    }
}
