use gaussrep_linalg::LinalgError;
use gaussrep_measures::MeasureError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("constraint vector vanishes on the truncation (norm {norm:e})")]
    Infeasible { norm: f64 },
    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),
    #[error("truncation {truncation} exceeds the window {window}")]
    TruncationTooLarge { truncation: usize, window: usize },
    #[error("non-positive diagonal shift {value:e} at index {index}")]
    NonPositive { index: i64, value: f64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
