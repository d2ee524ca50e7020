use thiserror::Error;

/// Errors produced by the search model, strategies and numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A trace or plan violates the motion model.
    #[error("invalid trace at segment {index}: {reason}")]
    InvalidTrace { index: usize, reason: String },

    /// The plan ended before any robot reached the goal.
    #[error("goal unreachable within horizon {horizon}")]
    GoalUnreachable { horizon: usize },

    /// A geometric radius left the range of finite doubles.
    #[error("radius overflow at stage {stage}")]
    Overflow { stage: usize },

    /// A finite prefix is too short to decide the requested quantity.
    #[error("insufficient horizon: {0}")]
    InsufficientHorizon(String),

    /// The cyclic-conversion argument failed to produce a witness even though
    /// its preconditions hold on the prefix.
    #[error("no witness for index {j}")]
    WitnessNotFound { j: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
