use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({x}, {y}) lies outside the source domain of the map")]
    OutOfDomain { x: f64, y: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("epsilon = {epsilon} is not admissible: {reason}")]
    Inadmissible { epsilon: f64, reason: String },

    #[error("zero level of the regularized distance is not bracketed along the ray at angle {angle}")]
    RootNotBracketed { angle: f64 },

    #[error("radial blend is not monotone along the ray at angle {angle}; mu is too large for this pair")]
    NonMonotoneBlend { angle: f64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("triangle {triangle} has non-positive signed area {area}")]
    InvertedElement { triangle: usize, area: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("no spectral gap: largest dropped eigenvalue {dropped:e}, smallest kept {kept:e}")]
    KernelSeparationFailure { dropped: f64, kept: f64 },

    #[error("kernel dimension {found} differs from the expected {expected}")]
    KernelDimension { expected: usize, found: usize },

    #[error("eigensolver failed to converge")]
    EigenSolver,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
