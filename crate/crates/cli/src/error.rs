use std::path::PathBuf;

use heun_core::HeunError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("malformed job file: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("invalid job: {0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] HeunError),

    #[error("serialization failed: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for anything wrong with the input, 3 for numerical trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Write { .. } | CliError::Toml(_) | CliError::Invalid(_) => 2,
            CliError::Core(HeunError::InvalidParameters { .. } | HeunError::DegenerateLeadingPolynomial) => 2,
            CliError::Core(_) | CliError::Output(_) => 3,
        }
    }
}
