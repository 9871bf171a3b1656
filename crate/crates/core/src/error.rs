use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed characteristics: {0} and {1}")]
    CharacteristicMismatch(u64, u64),
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degenerate part: {0}")]
    Degenerate(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
