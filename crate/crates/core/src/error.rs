use thiserror::Error;

use crate::exactnum::QuadExt;
use crate::mapdef::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("point {0} lies outside the domain")]
    OutOfDomain(QuadExt),
    #[error("no branch defines the map at {0}")]
    NoBranch(QuadExt),
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(QuadExt),
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(QuadExt),
    #[error("corpus index {0} out of range 1..=14")]
    IndexOutOfRange(usize),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("cannot write output: {0}")]
    UnwritableOutput(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
