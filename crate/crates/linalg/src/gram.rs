use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::minors::det;
use crate::{minor, subsets_of_size, DenseMatrix, LinalgError, Result};

fn check_equal_dims(vectors: &[Vec<f64>]) -> Result<usize> {
    let first = vectors.first().ok_or(LinalgError::Empty)?;
    for v in vectors {
        if v.len() != first.len() {
            return Err(LinalgError::DimensionMismatch { expected: first.len(), got: v.len() });
        }
    }
    Ok(first.len())
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn gram_na(vectors: &[&[f64]]) -> DMatrix<f64> {
    let k = vectors.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = dot(vectors[i], vectors[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn psd_det(g: &DMatrix<f64>) -> f64 {
    let d = match g.nrows() {
        0 => 1.0,
        1 => g[(0, 0)],
        2 => g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)],
        _ => g.clone().lu().determinant(),
    };
    d.max(0.0)
}

pub fn gram_matrix(vectors: &[Vec<f64>]) -> Result<DenseMatrix> {
    check_equal_dims(vectors)?;
    let refs: Vec<&[f64]> = vectors.iter().map(|v| v.as_slice()).collect();
    DenseMatrix::from_nalgebra(gram_na(&refs))
}

/// Γ(x_1..x_k); rounding noise below zero is clamped to 0.
pub fn gram_determinant(vectors: &[Vec<f64>]) -> Result<f64> {
    check_equal_dims(vectors)?;
    let refs: Vec<&[f64]> = vectors.iter().map(|v| v.as_slice()).collect();
    Ok(psd_det(&gram_na(&refs)))
}

fn principal(g: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| g[(idx[i], idx[j])])
}

/// Δ(f_1..f_k) = det(I+γ(f_1..f_k))/det(I+γ(f_2..f_k)) − 1, evaluated as
/// Σ_{S⊆{2..k}} Γ(f_1,S) / Σ_{S⊆{2..k}} Γ(S).
pub fn delta_functional(fs: &[Vec<f64>]) -> Result<f64> {
    check_equal_dims(fs)?;
    let refs: Vec<&[f64]> = fs.iter().map(|v| v.as_slice()).collect();
    Ok(delta_subset_sums(&gram_na(&refs)))
}

/// Δ from a precomputed Gram matrix γ(f_1..f_k).
pub fn delta_from_gram(g: &DenseMatrix) -> Result<f64> {
    let k = g.require_square()?;
    if k == 0 {
        return Err(LinalgError::Empty);
    }
    Ok(delta_subset_sums(g.as_nalgebra()))
}

fn delta_subset_sums(g: &DMatrix<f64>) -> f64 {
    let k = g.nrows();
    let mut num = 0.0;
    let mut den = 0.0;
    for mask in 0u32..(1 << (k - 1)) {
        let rest: Vec<usize> = (1..k).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let mut with_first = vec![0];
        with_first.extend(&rest);
        num += psd_det(&principal(g, &with_first));
        den += psd_det(&principal(g, &rest));
    }
    num / den
}

/// Δ from the literal determinant ratio; used as an oracle.
pub fn delta_functional_ratio(fs: &[Vec<f64>]) -> Result<f64> {
    check_equal_dims(fs)?;
    let refs: Vec<&[f64]> = fs.iter().map(|v| v.as_slice()).collect();
    let g = gram_na(&refs);
    let k = fs.len();
    let top = g.clone() + DMatrix::identity(k, k);
    let bottom = principal(&g, &(1..k).collect::<Vec<_>>()) + DMatrix::identity(k - 1, k - 1);
    let num = DenseMatrix::from_nalgebra(top)?;
    let den = if k == 1 { 1.0 } else { det(&DenseMatrix::from_nalgebra(bottom)?)? };
    Ok(det(&num)? / den - 1.0)
}

/// Distance from f0 to span(f_1..f_n) as sqrt(Γ(f0,f_1..f_n)/Γ(f_1..f_n)).
/// The ratio is read off a Householder QR of [f_1..f_n, f0]: Γ = Π R_ii², so the
/// ratio is the last R_ii², free of the cancellation in a determinant quotient.
pub fn hyperplane_distance(f0: &[f64], span: &[Vec<f64>]) -> Result<f64> {
    if span.is_empty() {
        return Ok(dot(f0, f0).sqrt());
    }
    let mut all = span.to_vec();
    all.push(f0.to_vec());
    check_equal_dims(&all)?;
    let k = span.len();
    let dim = f0.len();
    let hadamard: f64 = span.iter().map(|v| dot(v, v)).product();
    if dim < k {
        return Err(LinalgError::DegenerateSpan { gram: 0.0 });
    }
    let cols = DMatrix::from_fn(dim, k + 1, |i, j| all[j][i]);
    let r = cols.qr().r();
    let gs: f64 = (0..k).map(|i| r[(i, i)] * r[(i, i)]).product();
    if gs <= 1e-12 * hadamard || gs == 0.0 {
        return Err(LinalgError::DegenerateSpan { gram: gs });
    }
    Ok(if dim > k { r[(k, k)].abs() } else { 0.0 })
}

/// Σ over r-column subsets of squared r×r minors of an r×n matrix X; equals Γ(rows of X).
pub fn squared_maximal_minors(x: &DenseMatrix) -> Result<f64> {
    let r = x.nrows();
    let rows = crate::SubsetIndex::full(r);
    subsets_of_size(x.ncols(), r)
        .iter()
        .map(|cols| minor(x, &rows, cols).map(|v| v * v))
        .sum()
}

/// 1 + Σ of all squared minors of X, which equals det(I + XᵀX).
pub fn det_i_plus_xtx_expansion(x: &DenseMatrix) -> Result<f64> {
    let top = x.nrows().min(x.ncols());
    let mut total = 1.0;
    for k in 1..=top {
        for rows in subsets_of_size(x.nrows(), k) {
            for cols in subsets_of_size(x.ncols(), k) {
                let v = minor(x, &rows, &cols)?;
                total += v * v;
            }
        }
    }
    Ok(total)
}

/// A = diag(λ) + γ(g_1..g_n): a diagonal shift plus the Gram matrix of
/// n short generator vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSystem {
    pub lambda: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
}

impl GramSystem {
    pub fn new(lambda: Vec<f64>, generators: Vec<Vec<f64>>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(LinalgError::Empty);
        }
        if generators.len() != lambda.len() {
            return Err(LinalgError::DimensionMismatch { expected: lambda.len(), got: generators.len() });
        }
        check_equal_dims(&generators)?;
        if lambda.iter().chain(generators.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(GramSystem { lambda, generators })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn check_positive(&self) -> Result<()> {
        match self.lambda.iter().position(|&l| l <= 0.0) {
            Some(index) => Err(LinalgError::NonPositiveShift { index, value: self.lambda[index] }),
            None => Ok(()),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.len();
        let g = &self.generators;
        let m = DMatrix::from_fn(n, n, |i, j| {
            dot(&g[i], &g[j]) + if i == j { self.lambda[i] } else { 0.0 }
        });
        DenseMatrix::from_nalgebra(m).expect("finite by construction")
    }

    /// The family [a/√λ, g_{·1}/√λ, …, g_{·d}/√λ] entering Δ.
    pub fn rescaled(&self, a: &[f64]) -> Vec<Vec<f64>> {
        let s: Vec<f64> = self.lambda.iter().map(|l| l.sqrt()).collect();
        let mut out = vec![a.iter().zip(&s).map(|(x, r)| x / r).collect::<Vec<_>>()];
        for j in 0..self.dim() {
            out.push(self.generators.iter().zip(&s).map(|(g, r)| g[j] / r).collect());
        }
        out
    }

    /// (A⁻¹a, a) by the Woodbury identity; O(n d²).
    pub fn quadform_woodbury(&self, a: &[f64]) -> Result<f64> {
        self.check_positive()?;
        if a.len() != self.len() {
            return Err(LinalgError::DimensionMismatch { expected: self.len(), got: a.len() });
        }
        let d = self.dim();
        let base: f64 = a.iter().zip(&self.lambda).map(|(x, l)| x * x / l).sum();
        if d == 0 {
            return Ok(base);
        }
        let mut cap = DMatrix::<f64>::identity(d, d);
        let mut v = DVector::<f64>::zeros(d);
        for ((g, l), x) in self.generators.iter().zip(&self.lambda).zip(a) {
            for i in 0..d {
                v[i] += g[i] * x / l;
                for j in 0..d {
                    cap[(i, j)] += g[i] * g[j] / l;
                }
            }
        }
        let chol = cap.cholesky().ok_or(LinalgError::Singular)?;
        let w = chol.solve(&v);
        Ok(base - v.dot(&w))
    }
}

/// (A⁻¹a, a) for A = diag(λ)+γ(g), verified against Δ of the rescaled family.
pub fn gram_system_quadform(sys: &GramSystem, a: &[f64]) -> Result<f64> {
    let w = sys.quadform_woodbury(a)?;
    let delta = delta_functional(&sys.rescaled(a))?;
    let scale: f64 = a.iter().zip(&sys.lambda).map(|(x, l)| x * x / l).sum();
    if (w - delta).abs() > 1e-8 * scale.max(w.abs()) + 1e-14 {
        return Err(LinalgError::IdentityMismatch { what: "gram system quadform", lhs: w, rhs: delta });
    }
    Ok(w)
}
