use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::{is_spd, DenseMatrix, LinalgError, Result};

/// Constraint vectors with Euclidean norm below this are treated as zero.
pub const FEASIBILITY_EPS: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinQuad {
    pub value: f64,
    pub argmin: Vec<f64>,
}

fn norm(b: &[f64]) -> f64 {
    b.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// min (At,t) subject to (t,b)=1: value 1/(A⁻¹b,b), attained at A⁻¹b/(A⁻¹b,b).
pub fn min_quadratic_on_hyperplane(a: &DenseMatrix, b: &[f64]) -> Result<MinQuad> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
    }
    if norm(b) < FEASIBILITY_EPS {
        return Err(LinalgError::InfeasibleConstraint);
    }
    if !is_spd(a) {
        return Err(LinalgError::NotSpd);
    }
    let chol = a.as_nalgebra().clone().cholesky().ok_or(LinalgError::NotSpd)?;
    let bv = DVector::from_column_slice(b);
    let x = chol.solve(&bv);
    let q = x.dot(&bv);
    Ok(MinQuad { value: 1.0 / q, argmin: x.iter().map(|v| v / q).collect() })
}

/// Diagonal case: value (Σ b_k²/a_k)⁻¹.
pub fn min_quadratic_diagonal(diag: &[f64], b: &[f64]) -> Result<MinQuad> {
    if diag.len() != b.len() {
        return Err(LinalgError::DimensionMismatch { expected: diag.len(), got: b.len() });
    }
    if let Some(index) = diag.iter().position(|&d| d <= 0.0) {
        return Err(LinalgError::NonPositiveShift { index, value: diag[index] });
    }
    if norm(b) < FEASIBILITY_EPS {
        return Err(LinalgError::InfeasibleConstraint);
    }
    let q: f64 = b.iter().zip(diag).map(|(x, d)| x * x / d).sum();
    let value = 1.0 / q;
    Ok(MinQuad { value, argmin: b.iter().zip(diag).map(|(x, d)| x / d * value).collect() })
}
