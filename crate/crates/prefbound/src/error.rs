use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Validation messages name the specific violated inequality rather than
/// clamping silently, so an invalid bound is never mislabelled as valid.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request is well-formed but exceeds a documented capacity guard.
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    /// The input is in a degenerate position (e.g. coincident midpoints).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
