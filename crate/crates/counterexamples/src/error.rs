use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CounterexampleError {
    #[error(transparent)]
    Core(#[from] barron_core::Error),
    #[error(transparent)]
    Oracle(#[from] barron_oracle::OracleError),
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, CounterexampleError>;
