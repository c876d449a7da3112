use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, {cols} cols")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("empty matrix product")]
    EmptyProduct,

    #[error("matrix is not Hermitian (deviation {deviation:e} exceeds {tol:e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:e})")]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("fractional power {exponent} undefined for eigenvalue {eigenvalue}")]
    InvalidPower { eigenvalue: f64, exponent: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("eigenvalue {eigenvalue} is negative beyond tolerance")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("eigenvalue {eigenvalue} below eigen-floor {floor}")]
    BelowEigenFloor { eigenvalue: f64, floor: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("unknown inequality target: {0}")]
    UnknownTarget(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
