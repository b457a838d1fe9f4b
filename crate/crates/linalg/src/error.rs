use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    Empty,
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("subset index {index} out of range 1..={dim}")]
    SubsetOutOfRange { index: usize, dim: usize },
    #[error("subset indices must be strictly increasing")]
    SubsetNotIncreasing,
    #[error("row and column subsets differ in size ({rows} vs {cols})")]
    SubsetSizeMismatch { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("constraint vector is zero; the hyperplane (t,b)=1 is empty")]
    InfeasibleConstraint,
    #[error("spanning family is degenerate (Gram determinant {gram:e})")]
    DegenerateSpan { gram: f64 },
    #[error("shift entry {index} is not strictly positive ({value})")]
    NonPositiveShift { index: usize, value: f64 },
    #[error("size {n} exceeds the cap {cap} for subset expansions")]
    TooLarge { n: usize, cap: usize },
    #[error("{what}: expansion {lhs:e} disagrees with direct value {rhs:e}")]
    IdentityMismatch { what: &'static str, lhs: f64, rhs: f64 },
}
