use gaussrep_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: &'static str, reason: String },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not orthogonal (max |tᵀt − I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("coefficient vector is zero")]
    ZeroVector,
    #[error("dimension {m} exceeds the cap {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
