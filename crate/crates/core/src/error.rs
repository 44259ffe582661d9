use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("requested {requested} letters but the prefix cache holds at most {cap}")]
    LengthCap { requested: usize, cap: usize },
    #[error("rotation phase {0} is outside [0, 1)")]
    InvalidPhase(f64),
    #[error("`{0}` is not a factor of the Fibonacci word")]
    NotAFactor(String),
    #[error("coefficient {0} does not lie in the open unit disc")]
    OutsideDisc(Complex64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {index} is outside the stored range {start}..{end}")]
    OutOfRange { index: i64, start: i64, end: i64 },
    #[error("root finder stopped after {iterations} iterations with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("walk support reached the window edge at step {step}")]
    BoundaryContact { step: usize },
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
