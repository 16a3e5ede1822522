use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("not prime: {0}")]
    NotPrime(String),
    #[error("point not on curve: {0}")]
    NotOnCurve(String),
    #[error("singular curve")]
    Singular,
    #[error("bad torsion point: {0}")]
    BadTorsion(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("hypothesis {name} failed: {detail}")]
    Hypothesis { name: String, detail: String },
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
