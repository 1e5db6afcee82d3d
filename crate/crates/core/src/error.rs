use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rho must be positive and finite, got {0}")]
    NonPositiveRho(f64),

    #[error("associated function saturated: maximizer reached truncation index {truncation}")]
    Saturated { truncation: usize },

    #[error("weight sequence too short: need at least {needed} terms, have {have}")]
    TruncationTooShort { needed: usize, have: usize },

    #[error("invalid weight sequence: {0}")]
    InvalidWeight(String),

    #[error("ultrapolynomial tail bound violated at |z| = {z_abs}: dropped tail {tail:e} >= {bound:e}")]
    TailBound { z_abs: f64, tail: f64, bound: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("kernel matrix is already weighted")]
    DoubleWeighting,

    #[error("numerical overflow: {0}")]
    Overflow(String),

    #[error("expansion has {have} terms, requested partial sum of {requested}")]
    PartialSumRange { have: usize, requested: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("growth envelope missing")]
    EnvelopeMissing,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
