use thiserror::Error;

/// Input errors raised by constructors and operations whose preconditions
/// can be checked up front. Failed *predicates* are reported through
/// [`Verdict`](crate::Verdict) instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch: {left} points vs {right} points")]
    SpaceMismatch { left: usize, right: usize },

    #[error("point index {index} out of range for a space of {size} points")]
    PointOutOfRange { index: usize, size: usize },

    #[error("a space needs at least one point")]
    EmptySpace,

    #[error("invalid labels: {0}")]
    Labels(String),

    #[error("invalid metric: {0}")]
    Metric(String),

    #[error("invalid family: {0}")]
    Family(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exact search limited to {limit} points, got {size}; use greedy mode")]
    SearchTooLarge { size: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
