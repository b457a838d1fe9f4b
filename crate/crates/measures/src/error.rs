use gaussrep_group::GroupError;
use gaussrep_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("invalid Gaussian factor (b={b}, a={a}) at row {row}, index {n}")]
    InvalidFactor { row: usize, n: i64, b: f64, a: f64 },
    #[error("row count {0} not supported here")]
    RowCount(usize),
    #[error("window must be at least 1")]
    EmptyWindow,
    #[error("index {n} outside the window ±{window}")]
    OutOfWindow { n: i64, window: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("element is not in the declared class: {0}")]
    NotInClass(String),
    #[error("unknown example '{0}'")]
    UnknownExample(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("spec JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
