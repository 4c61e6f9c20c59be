use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative argument: {0}")]
    NegativeArgument(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("polynomial has half-integer frequencies; an integer-lattice input is required")]
    NotIntegerLattice,
    #[error("operation requires exact scalars")]
    NonExactMode,
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("unknown form id `{0}`")]
    UnknownForm(String),
    #[error("unknown inequality id `{0}`")]
    UnknownInequality(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
