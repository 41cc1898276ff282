//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid policy space: {0}")]
    InvalidSpace(String),

    #[error("voter {index}: {reason}")]
    InvalidVoter { index: usize, reason: String },

    #[error("a voting situation needs at least one voter")]
    NoVoters,

    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),

    #[error("point lies outside the policy space")]
    OutsideSpace,

    #[error("point must be interior to the policy space")]
    NotInterior,

    #[error("direction vector must be nonzero")]
    ZeroDirection,

    #[error("line anchor does not coincide with the given point")]
    AnchorMismatch,

    #[error("parity: operation requires an even number of voters")]
    RequiresEvenVoters,

    #[error("parity: operation requires an odd number of voters")]
    RequiresOddVoters,

    #[error("generator: {0}")]
    Generator(String),

    #[error("tournament: {0}")]
    Tournament(String),

    #[error("rendering supports 2-dimensional instances only (got dimension {0})")]
    RenderDimension(usize),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
