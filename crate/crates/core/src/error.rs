use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("quotient graph not stable by depth {depth}: {reason}")]
    NotStabilized { depth: u32, reason: String },
    #[error("support of a cuspidal cochain leaks into layer {0}")]
    SupportLeak(u32),
    #[error("path summation did not terminate within {0} steps")]
    PathCap(usize),
    #[error("no eigenform matches: {0}")]
    NoEigenform(String),
    #[error("eigenspace has dimension {0} (expected 1)")]
    EigenspaceDimension(usize),
    #[error("singular curve (discriminant zero)")]
    SingularCurve,
    #[error("bad reduction at {0}")]
    BadPlace(String),
    #[error("reduction check failed: {0}")]
    Reduction(String),
    #[error("fixture data corrupted: {0}")]
    Fixture(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
