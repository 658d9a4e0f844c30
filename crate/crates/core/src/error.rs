use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the exit-code classes of the command-line front end:
/// parameter problems, resource budgets, and everything else.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction produced an object that violates a structural guarantee
    /// (non-direct sum, short orbit, degenerate restriction).
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
