use thiserror::Error;

/// Errors shared by the path, metric, simulation and estimation layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("time {0} outside [0,1]")]
    TimeOutOfRange(f64),
    #[error("left limit undefined at t = 0")]
    LeftLimitAtZero,
    #[error("coordinate index {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("linear combination weights must be nonzero")]
    ZeroCombination,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("tail index alpha must lie in (0,2), got {0}")]
    InvalidAlpha(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("recursion diverged at step {step} (norm {norm:.3e})")]
    Diverged { step: usize, norm: f64 },
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("point measure not in the continuity set: {0}")]
    NotInLambda(String),
    #[error("continuity probe precondition violated: {0}")]
    Probe(String),
}

pub type Result<T> = std::result::Result<T, Error>;
