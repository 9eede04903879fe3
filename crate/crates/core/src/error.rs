use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("activation {0} is not supported here: {1}")]
    UnsupportedActivation(&'static str, String),
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("empty representation")]
    Empty,
    #[error("representation has zero norm")]
    ZeroNorm,
    #[error("range estimate is unbounded")]
    UnboundedRange,
    #[error(
        "-Δu = σ(wᵀx+b) has no solution in the same-activation ReLU class: \
         any ReLU-Barron function grows at most linearly at infinity, the \
         solution grows cubically"
    )]
    GrowthObstruction,
    #[error("atom {0} has w = 0: a constant σ'' source has no solution of the form ã σ(w̃ᵀx+b̃)")]
    ConstantSource(usize),
    #[error("value {value} left the log-profile interval [{lo}, {hi}]")]
    OutsideLogInterval { value: f64, lo: f64, hi: f64 },
    #[error("format error: {0}")]
    Format(String),
    #[error("unsupported format version {0:?}")]
    Version(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
