use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("halfspace normal must be nonzero")]
    ZeroNormal,
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("halfspace intersection is empty")]
    Infeasible,
    #[error("polytope is not full-dimensional: affine dimension {found} in R^{dim}")]
    Degenerate { dim: usize, found: usize },
    #[error("vertex index {0} out of range")]
    InvalidIndex(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}
