//! Error type shared by all modules.

/// Crate-wide error. Variants map to the failure classes the public
/// operations can hit; numerical non-convergence is kept separate from
/// argument errors so callers can exit with distinct codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A search found no feasible point; carries a diagnostic dump.
    #[error("no feasible point: {0}")]
    Infeasible(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
