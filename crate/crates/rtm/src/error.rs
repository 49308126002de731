use thiserror::Error;

use crate::machine::{Params, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rule: {0}")]
    MalformedRule(String),
    #[error("parameter mismatch: {0:?} vs {1:?}")]
    ParamMismatch(Params, Params),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("machine is not reversible")]
    NotReversible,
    #[error("machine writes the tape")]
    NotRfa,
    #[error("table too large ({0} rows)")]
    TooLarge(u128),
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("control word {0:?} is unary")]
    UnaryControl(Vec<Sym>),
    #[error("clopen set intersects its own shift")]
    Overlap,
    #[error("word too short: need {need} letters, got {got}")]
    WordTooShort { need: usize, got: usize },
    #[error("constant nonzero movement {0} along an infinite run")]
    NonzeroResidualMovement(i32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
