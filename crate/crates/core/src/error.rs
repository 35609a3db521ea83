use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NotASquare,
    #[error("field context mismatch: {left} variables vs {right} variables")]
    ContextMismatch { left: usize, right: usize },
    #[error("slot must be nonzero")]
    ZeroSlot,
    #[error("form #{index} is isotropic")]
    IsotropicInput { index: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("fold mismatch: {left}-fold vs {right}-fold")]
    FoldMismatch { left: usize, right: usize },
    #[error("bad rank {0}: need n >= 2")]
    BadRank(usize),
    #[error("factor size m = {m} outside 1..={max}")]
    BadFactorSize { m: usize, max: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("completion not found: {0}")]
    CompletionNotFound(String),
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("w must be nonzero")]
    ZeroW,
    #[error("identity check failed: {0}")]
    IdentityMismatch(String),
    #[error("quaternion algebra mismatch")]
    AlgebraMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}
