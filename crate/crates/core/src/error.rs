use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error("operator is not Hermitian: max |A - A*| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("operator is singular")]
    Singular,

    #[error("time {t} outside the family range [0, {t_max}]")]
    OutOfRange { t: f64, t_max: f64 },

    #[error("resolvent family unsafe: t_max * ||L|| = {product} exceeds the margin {margin}")]
    ResolventRange { product: f64, margin: f64 },

    #[error("hypothesis {condition} violated: {detail}")]
    Hypothesis { condition: u8, detail: String },

    #[error("multinomial enumeration needs {required} terms but the cap is {cap}")]
    TermCapExceeded { required: u128, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config rejected: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
