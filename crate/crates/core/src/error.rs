use thiserror::Error;

/// Errors raised while building graphs, operators and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size {size}: {reason}")]
    InvalidSize { size: usize, reason: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {node} has no neighbors; the stealing operator needs degree >= 1")]
    DegenerateGraph { node: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("operation requires the cube topology")]
    NotCube,

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
