//! Table reports for the `collatz` command-line tool.

pub mod reports;
pub mod table;

use collatz_descent::{DynamicsError, PatternError, ScanError};

/// Failure of a subcommand, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input; exits with 2 like argument errors.
    #[error("{0}")]
    Usage(String),
    /// Well-formed input the library rejected; exits with 1.
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<PatternError> for CliError {
    fn from(e: PatternError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        CliError::Domain(e.to_string())
    }
}
