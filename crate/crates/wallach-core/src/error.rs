//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or analyzing a space.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension or size parameter is out of the supported range.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Malformed input data (structure constants, JSON, coefficient strings, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two vectors (or a vector and a space) living over different algebras
    /// were combined.
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    /// The bilinear form derived from the structure constants is not negative
    /// definite, so the algebra is not of compact semisimple type and no
    /// positive inner product exists.
    #[error("not compact semisimple: {0}")]
    NotCompactSemisimple(String),

    /// An operation that needs a nonzero vector received zero.
    #[error("zero vector: {0}")]
    ZeroVector(String),

    /// A vector has support outside the subspace the operation requires.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// The requested operation is not defined for this space (e.g. a flow
    /// that needs trivial isotropy).
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    /// Catalog lookup failed.
    #[error("unknown space: {0}")]
    UnknownSpace(String),

    /// Underlying I/O failure (file-based descriptors, report output).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
