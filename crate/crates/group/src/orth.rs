use gaussrep_linalg::{cofactor_matrix, DenseMatrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::families::MAX_DIM;
use crate::{Family, GroupElement, GroupError, Result};

/// max |tᵀt − I|
pub fn orthogonality_defect(t: &DenseMatrix) -> f64 {
    if !t.is_square() {
        return f64::INFINITY;
    }
    let tt = t.transpose().mul(t).expect("square");
    tt.max_abs_diff(&DenseMatrix::identity(t.nrows()))
}

pub fn is_orthogonal(t: &DenseMatrix, tol: f64) -> bool {
    orthogonality_defect(t) <= tol
}

/// (gP_r)² = I and P_r g P_r = g⁻¹, each tested to 1e-10.
pub fn involution_check(g: &GroupElement, r: usize) -> Result<(bool, bool)> {
    let m = g.dim();
    if r == 0 || r > m {
        return Err(GroupError::InvalidParams { family: "reflection", reason: format!("index {r} outside 1..={m}") });
    }
    let p = DenseMatrix::from_fn(m, m, |i, j| match (i == j, i == r - 1) {
        (true, true) => -1.0,
        (true, false) => 1.0,
        _ => 0.0,
    })?;
    let id = DenseMatrix::identity(m);
    let gp = g.matrix().mul(&p)?;
    let squared = gp.mul(&gp)?;
    let is_involution = squared.max_abs_diff(&id) <= 1e-10;
    let pgp = p.mul(g.matrix())?.mul(&p)?;
    let conj = pgp.mul(g.matrix())?.max_abs_diff(&id) <= 1e-10;
    Ok((is_involution, conj))
}

/// max |t_kn − sign(det t)·A^k_n(t)| for orthogonal t.
pub fn orthogonal_cofactor_identity(t: &DenseMatrix) -> Result<f64> {
    let m = t.require_square()?;
    if m > MAX_DIM {
        return Err(GroupError::TooLarge { m, cap: MAX_DIM });
    }
    let deviation = orthogonality_defect(t);
    if deviation > 1e-10 {
        return Err(GroupError::NotOrthogonal { deviation });
    }
    let sign = gaussrep_linalg::det(t)?.signum();
    let a = cofactor_matrix(t)?;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            worst = worst.max((t.get(i, j) - sign * a.get(i, j)).abs());
        }
    }
    Ok(worst)
}

/// Output of the rank-one construction.
#[derive(Debug, Clone)]
pub struct RankOne {
    /// The orthogonal t with D(s) t D(s)⁻¹ − I = λ ⊗ C.
    pub element: GroupElement,
    pub lambda: Vec<f64>,
    /// D(s) t D(s)⁻¹ = I + λ ⊗ C.
    pub scaled: DenseMatrix,
}

/// The unique orthogonal t whose conjugate by D(s) = diag(s) differs from I by λ ⊗ C.
/// λ_k = −2 s_k² C_k / Σ s_r² C_r².
pub fn orthogonal_from_rankone(c: &[f64], s: &[f64]) -> Result<RankOne> {
    let m = c.len();
    if m == 0 || m > MAX_DIM {
        return Err(GroupError::TooLarge { m, cap: MAX_DIM });
    }
    if s.len() != m || s.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(GroupError::InvalidParams { family: "rank_one", reason: "s must be positive, same length as C".into() });
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(GroupError::InvalidParams { family: "rank_one", reason: "non-finite C".into() });
    }
    let norm: f64 = c.iter().zip(s).map(|(ci, si)| si * si * ci * ci).sum();
    if norm == 0.0 {
        return Err(GroupError::ZeroVector);
    }
    let lambda: Vec<f64> = c.iter().zip(s).map(|(ci, si)| -2.0 * si * si * ci / norm).collect();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let t = DenseMatrix::from_fn(m, m, |k, r| delta(k, r) + lambda[k] * c[r] * s[r] / s[k])?;
    let scaled = DenseMatrix::from_fn(m, m, |k, r| delta(k, r) + lambda[k] * c[r])?;
    let element = GroupElement::new(t, Family::RankOne { c: c.to_vec(), s: s.to_vec(), lambda: lambda.clone() })?;
    Ok(RankOne { element, lambda, scaled })
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
pub fn random_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<GroupElement> {
    if m == 0 || m > MAX_DIM {
        return Err(GroupError::TooLarge { m, cap: MAX_DIM });
    }
    let g = DMatrix::<f64>::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    GroupElement::new(DenseMatrix::from_nalgebra(q)?, Family::Generic)
}

/// g² = I to 1e-10.
pub fn is_involution(g: &GroupElement) -> bool {
    let sq = g.matrix().mul(g.matrix()).expect("square");
    sq.max_abs_diff(&DenseMatrix::identity(g.dim())) <= 1e-10
}
