use std::io;
use std::path::PathBuf;

use bellgraph::{SamplingError, ScenarioError, TableError};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const SAMPLING: i32 = 3;
    pub const VERIFY: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("sampling failed: {0}")]
    Sampling(#[from] SamplingError),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Table(_) | CliError::Scenario(_) | CliError::Input(_) => {
                exit::CONFIG
            }
            CliError::Sampling(_) => exit::SAMPLING,
            CliError::Verify(_) => exit::VERIFY,
            CliError::Io { .. } => exit::IO,
        }
    }
}
