//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, backends, graph construction, and the
/// delegation protocol.
#[derive(Debug, Error)]
pub enum Error {
    /// A gate-word token could not be parsed.
    #[error("parse error in token {index} ({token:?}): {reason}")]
    Parse {
        /// Zero-based index of the offending whitespace-separated token.
        index: usize,
        /// The token text.
        token: String,
        /// Why it was rejected.
        reason: String,
    },

    /// An atom referenced a mode outside the state or graph.
    #[error("mode {mode} out of range (have {n_modes} modes)")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    /// A two-mode atom addressed the same mode twice.
    #[error("two-mode gate addressed mode {mode} twice")]
    DuplicateMode { mode: usize },

    /// The Gaussian backend was asked to apply a cubic (non-Gaussian) atom.
    #[error("cubic atom cannot be applied by the Gaussian backend")]
    NonGaussianOnGaussianBackend,

    /// A squeeze parameter was not strictly positive.
    #[error("squeeze parameter must be positive, got {0}")]
    InvalidSqueeze(f64),

    /// A state file or configuration had an invalid shape.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A graph failed validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A claimed graph embedding does not hold.
    #[error("no embedding: {0}")]
    NoEmbedding(String),

    /// Protocol bookkeeping was asked to do something inconsistent.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// A transcript's messages departed from the canonical exchange order.
    #[error("message order violation: {0}")]
    MessageOrder(String),

    /// Filesystem I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
