use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] barron_core::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular linear system at row {0}")]
    Singular(usize),
    #[error("nonpositive heat solution {value} at x = {x}")]
    NonPositive { value: f64, x: f64 },
}

pub type Result<T> = std::result::Result<T, OracleError>;
