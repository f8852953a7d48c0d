use std::fmt;

use conceptspace_core::Error as CoreError;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad invocation or unreadable/unparsable input. Exit code 1.
    Usage(String),
    /// The domain model or an argument violates a model invariant. Exit code 2.
    Validation(String),
    /// A dimension, cuboid or sample cap was exceeded. Exit code 3.
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Limit(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::LimitExceeded { .. } => CliError::Limit(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
