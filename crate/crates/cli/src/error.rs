use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] biaxial_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for numerical non-convergence,
    /// 4 for an ill-conditioned system.
    pub fn exit_code(&self) -> u8 {
        use biaxial_core::Error as E;
        match self {
            CliError::Core(E::IllConditioned { .. }) => 4,
            CliError::Core(
                E::NonConvergent { .. }
                | E::ToleranceNotMet { .. }
                | E::ExtrapolationDiverged { .. }
                | E::NoConvergence { .. },
            ) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
