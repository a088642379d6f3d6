//! File formats and command implementations behind the `pertexp` binary.

pub mod commands;
pub mod matrix_io;
pub mod report;

use std::fmt;

/// Process exit statuses. These are a stable contract.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NOT_SEMI_SIMPLE: i32 = 3;
    pub const DEGENERACY: i32 = 4;
    pub const SLOPES_FAILED: i32 = 5;
    pub const MATCHING_FAILED: i32 = 6;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(exit::USAGE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<pertexp::Error> for CliError {
    fn from(e: pertexp::Error) -> Self {
        use pertexp::Error::*;
        let code = match &e {
            Dimension { .. } | NonFinite | InvalidArgument(_) | GridUnsuitable(_) => exit::USAGE,
            NotSemiSimple { .. } | NoConvergence | SingularOperator { .. } => exit::NOT_SEMI_SIMPLE,
            DegenerateBase { .. } | SplittingFailed { .. } | HigherOrderDegeneracy { .. } => {
                exit::DEGENERACY
            }
            MatchingFailed { .. } | NormalizationBreakdown { .. } => exit::MATCHING_FAILED,
            Domain { .. } => exit::INTERNAL,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(exit::INTERNAL, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
