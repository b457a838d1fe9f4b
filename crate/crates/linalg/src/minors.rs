use nalgebra::DMatrix;

use crate::{subsets, DenseMatrix, LinalgError, Result, SubsetIndex};

/// Upper bound on the dimension accepted by the 2^n subset expansions.
pub const COFACTOR_SUM_CAP: usize = 12;

fn det_na(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

pub fn det(m: &DenseMatrix) -> Result<f64> {
    m.require_square()?;
    Ok(det_na(m.as_nalgebra()))
}

fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Determinant of the submatrix on the given 1-based rows and columns. M(∅,∅) = 1.
pub fn minor(m: &DenseMatrix, rows: &SubsetIndex, cols: &SubsetIndex) -> Result<f64> {
    if rows.len() != cols.len() {
        return Err(LinalgError::SubsetSizeMismatch { rows: rows.len(), cols: cols.len() });
    }
    rows.check_within(m.nrows())?;
    cols.check_within(m.ncols())?;
    Ok(det_na(&select(m.as_nalgebra(), &rows.zero_based(), &cols.zero_based())))
}

/// Minor of the complementary rows/columns with sign (-1)^{Σi+Σj}.
pub fn cofactor(m: &DenseMatrix, rows: &SubsetIndex, cols: &SubsetIndex) -> Result<f64> {
    let n = m.require_square()?;
    if rows.len() != cols.len() {
        return Err(LinalgError::SubsetSizeMismatch { rows: rows.len(), cols: cols.len() });
    }
    rows.check_within(n)?;
    cols.check_within(n)?;
    let sign = if (rows.position_sum() + cols.position_sum()) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * minor(m, &rows.complement(n), &cols.complement(n))?)
}

pub fn principal_minor(m: &DenseMatrix, alpha: &SubsetIndex) -> Result<f64> {
    m.require_square()?;
    minor(m, alpha, alpha)
}

fn cofactor_matrix_na(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, 1.0);
    }
    DMatrix::from_fn(n, n, |i, j| {
        let rows: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let cols: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * det_na(&select(m, &rows, &cols))
    })
}

/// First-order cofactors A^i_j: entry (i,j) is the signed minor with row i and column j removed.
pub fn cofactor_matrix(m: &DenseMatrix) -> Result<DenseMatrix> {
    m.require_square()?;
    DenseMatrix::from_nalgebra(cofactor_matrix_na(m.as_nalgebra()))
}

fn check_lambda(n: usize, lambda: &[f64]) -> Result<()> {
    if lambda.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: lambda.len() });
    }
    if n > COFACTOR_SUM_CAP {
        return Err(LinalgError::TooLarge { n, cap: COFACTOR_SUM_CAP });
    }
    Ok(())
}

fn shifted(c: &DenseMatrix, lambda: &[f64]) -> DMatrix<f64> {
    let mut m = c.as_nalgebra().clone();
    for (i, l) in lambda.iter().enumerate() {
        m[(i, i)] += l;
    }
    m
}

fn lambda_over(lambda: &[f64], alpha: &SubsetIndex) -> f64 {
    alpha.indices().iter().map(|&i| lambda[i - 1]).product()
}

/// Terms λ_{ᾱ}·M(α) of the subset expansion of det(diag(λ)+C), in lexicographic subset order.
pub fn char_poly_terms(c: &DenseMatrix, lambda: &[f64]) -> Result<Vec<(SubsetIndex, f64)>> {
    let n = c.require_square()?;
    check_lambda(n, lambda)?;
    subsets(n)
        .into_iter()
        .map(|alpha| {
            let w = lambda_over(lambda, &alpha.complement(n));
            let m = principal_minor(c, &alpha)?;
            Ok((alpha, w * m))
        })
        .collect()
}

/// det(diag(λ)+C) from the principal-minor expansion, checked against LU.
pub fn generalized_char_poly(c: &DenseMatrix, lambda: &[f64]) -> Result<f64> {
    let terms = char_poly_terms(c, lambda)?;
    let expansion: f64 = terms.iter().map(|(_, v)| v).sum();
    let scale: f64 = terms.iter().map(|(_, v)| v.abs()).sum();
    let direct = det_na(&shifted(c, lambda));
    if (expansion - direct).abs() > 1e-9 * scale + 1e-14 {
        return Err(LinalgError::IdentityMismatch { what: "char poly", lhs: expansion, rhs: direct });
    }
    Ok(expansion)
}

/// (C(λ)⁻¹a, a) with C(λ) = diag(λ)+C, from the cofactor-sum formula
/// Σ_{α≠∅} λ_{ᾱ} (A(C_α)a_α, a_α) / P_C(λ). Cross-checked against a direct solve.
pub fn shifted_inverse_quadform(c: &DenseMatrix, lambda: &[f64], a: &[f64]) -> Result<f64> {
    let n = c.require_square()?;
    check_lambda(n, lambda)?;
    if a.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: a.len() });
    }
    let full = shifted(c, lambda);
    let chol = full.clone().cholesky().ok_or(LinalgError::Singular)?;
    let p = generalized_char_poly(c, lambda)?;
    if p.abs() < f64::MIN_POSITIVE {
        return Err(LinalgError::Singular);
    }
    let cm = c.as_nalgebra();
    let mut num = 0.0;
    let mut scale = 0.0;
    for alpha in subsets(n).into_iter().skip(1) {
        let idx = alpha.zero_based();
        let sub = select(cm, &idx, &idx);
        let cof = cofactor_matrix_na(&sub);
        let mut q = 0.0;
        for (i, &ii) in idx.iter().enumerate() {
            for (j, &jj) in idx.iter().enumerate() {
                q += a[ii] * cof[(i, j)] * a[jj];
            }
        }
        let term = lambda_over(lambda, &alpha.complement(n)) * q;
        num += term;
        scale += term.abs();
    }
    let value = num / p;
    let av = nalgebra::DVector::from_column_slice(a);
    let direct = chol.solve(&av).dot(&av);
    if (value - direct).abs() > 1e-8 * (scale / p.abs()).max(direct.abs()) + 1e-14 {
        return Err(LinalgError::IdentityMismatch { what: "shifted inverse quadform", lhs: value, rhs: direct });
    }
    Ok(value)
}
