//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by construction and solver operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A numeric argument violated a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A phase function was non-monotone or left its admissible range.
    #[error("invalid phase: {0}")]
    InvalidPhase(String),

    /// The envelope magnitude a^2 + b^2 collapsed below the floor, so the
    /// arctangent quotient is meaningless (violated f1 > 0 assumption).
    #[error("degenerate envelope: min(a^2+b^2) = {min_sq} < {floor} * max")]
    DegenerateEnvelope { min_sq: f64, floor: f64 },

    /// File ingestion problems (CLI signal loading).
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn invalid_phase(msg: impl Into<String>) -> Self {
        Error::InvalidPhase(msg.into())
    }
}
