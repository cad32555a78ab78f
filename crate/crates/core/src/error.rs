use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("pole at evaluation point")]
    Pole,

    #[error("duplicate interpolation abscissa at position {0}")]
    DuplicateAbscissa(usize),

    #[error("dimension mismatch: ({0},{1}) vs ({2},{3})")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("minor size mismatch: {rows} rows vs {cols} columns")]
    MinorSizeMismatch { rows: usize, cols: usize },

    #[error("series not converging: {0}")]
    NotConverging(String),

    #[error("not invertible in truncated form")]
    NotInvertible,

    #[error("divergent parameter: {0}")]
    Divergent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unbalanced kernel term: left degree {left}, right degree {right}")]
    UnbalancedKernel { left: usize, right: usize },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("singular Gram matrix")]
    SingularGram,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
