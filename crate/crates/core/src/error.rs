use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("cube is not cell-aligned or lies outside the box: {0}")]
    Alignment(String),

    #[error("resolution too coarse: {0}")]
    Resolution(String),

    #[error("no family cube covers the request: {0}")]
    Coverage(String),

    #[error("root solve did not converge: {0}")]
    NonConvergence(String),

    #[error("sparse construction failed: {0}")]
    Construction(String),

    #[error("cost budget exceeded: {0}")]
    Budget(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Format(_) | Error::Io(_) => 2,
            Error::Alignment(_) | Error::Resolution(_) | Error::Coverage(_) | Error::Budget(_) => 3,
            Error::Construction(_) | Error::NonConvergence(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
