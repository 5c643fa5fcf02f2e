//! Sweep machinery behind the `prefbound` binary: range parsing, config
//! resolution, the shared CSV schema, and the subcommand runners.

pub mod config;
pub mod csvio;
pub mod rangespec;
pub mod runner;

use std::fmt;

/// CLI-level failures, each mapped to the documented exit code:
/// 1 verification failure, 2 invalid arguments, 3 capacity exceeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    InvalidArgument(String),
    Capacity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgument(_) | CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::InvalidArgument(m) => write!(f, "invalid arguments: {m}"),
            CliError::Capacity(m) => write!(f, "capacity exceeded: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<prefbound::Error> for CliError {
    fn from(e: prefbound::Error) -> Self {
        match e {
            prefbound::Error::CapacityExceeded(m) => CliError::Capacity(m),
            prefbound::Error::InvalidArgument(m) | prefbound::Error::DegenerateInput(m) => {
                CliError::InvalidArgument(m)
            }
        }
    }
}
