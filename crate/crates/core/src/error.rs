//! Error type shared by every module of the crate.

/// Errors produced by model construction, estimators, and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A size parameter (such as n = 0) is outside its documented range.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// A graphon or custom function produced a value outside [0,1].
    #[error("model violation: {0}")]
    ModelViolation(String),

    /// A graphon specification failed validation (asymmetric block matrix,
    /// non-monotone boundaries, ...).
    #[error("invalid graphon spec: {0}")]
    InvalidSpec(String),

    /// The instance is too small for the requested operation (for example the
    /// dissimilarity needs n >= 3 so that {k : k != i, i'} is nonempty).
    #[error("instance too small: {0}")]
    InstanceTooSmall(String),

    /// Bandwidth outside (0, 1].
    #[error("invalid bandwidth h = {0}; require 0 < h <= 1")]
    InvalidBandwidth(f64),

    /// Rank outside 1..=n for a truncated reconstruction.
    #[error("invalid rank k = {k} for n = {n}; require 1 <= k <= n")]
    InvalidRank { k: usize, n: usize },

    /// A scalar or structural parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two matrices (or a matrix and a label vector) disagree in size.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// ROC curve requested without both a hidden positive and a hidden
    /// negative pair.
    #[error("undefined ROC curve: {0}")]
    UndefinedCurve(String),

    /// An LAPACK routine reported failure.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Unknown method or graphon identifier.
    #[error("unknown identifier: {0}")]
    UnknownIdentifier(String),
}

pub type Result<T> = std::result::Result<T, Error>;
