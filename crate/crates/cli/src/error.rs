use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A config value failed to parse or validate; `path` is the JSON field path.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fracwalk_core::Error),
    #[error("output: {0}")]
    Output(String),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Config { path: path.into(), message: message.to_string() }
    }

    /// 2 for numerical failure, 1 for everything a user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(fracwalk_core::Error::AllCapped(_)) | CliError::ChecksFailed(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
