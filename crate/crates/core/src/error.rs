//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A function handed to a numerical routine produced a non-finite value.
    #[error("evaluation failed at {location}: value is not finite")]
    EvaluationFailure { location: String },

    /// The adaptive operator-term loop hit its dimension cap.
    #[error(
        "operator term did not converge below tol by dimension {dimension}: \
         last value {value:e}, error estimate {estimate:e}"
    )]
    NonConvergence {
        value: f64,
        estimate: f64,
        dimension: usize,
    },

    /// (I - K_w) was exactly singular in a resolvent solve.
    #[error("matrix I - K is exactly singular")]
    Singular,

    #[error("ODE integration failed at t = {t}: {message}")]
    Integration { t: f64, message: String },

    #[error("eigenvalue computation failed: {0}")]
    Eigensolver(String),

    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
