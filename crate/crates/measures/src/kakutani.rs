use gaussrep_group::GroupElement;
use gaussrep_linalg::{cofactor_matrix, det, det_i_plus_xtx_expansion, par, DenseMatrix};
use serde::{Deserialize, Serialize};

use crate::report::shells;
use crate::series::{mean_series, window_series, MeanMap};
use crate::{hellinger_factor, Class, MeasureError, MeasureSpec, Result, SeriesReport};

/// X_n(t) = B_n^{1/2} t B_n^{-1/2}: entries t_ij·√(b_in/b_jn).
pub fn block_matrix(spec: &MeasureSpec, t: &GroupElement, pos: usize) -> DenseMatrix {
    let m = spec.m;
    DenseMatrix::from_fn(m, m, |i, j| t.get(i, j) * (spec.b_at(i + 1, pos) / spec.b_at(j + 1, pos)).sqrt())
        .expect("finite")
}

fn check(spec: &MeasureSpec, t: &GroupElement) -> Result<()> {
    if t.dim() != spec.m {
        return Err(MeasureError::Shape(format!("element is {0}x{0}, measure has {1} rows", t.dim(), spec.m)));
    }
    Ok(())
}

fn ratio_at(spec: &MeasureSpec, t: &GroupElement, pos: usize) -> f64 {
    let x = block_matrix(spec, t, pos);
    let xtx = x.transpose().mul(&x).expect("square");
    let m = spec.m;
    let i_plus = DenseMatrix::from_fn(m, m, |i, j| xtx.get(i, j) + if i == j { 1.0 } else { 0.0 }).expect("finite");
    det(&i_plus).expect("square") / (2f64.powi(m as i32) * t.det().abs())
}

/// H_{m,n}(t) = (det(I + X_nᵀX_n) / (2^m |det t|))^{-1/2}.
pub fn hellinger_block(spec: &MeasureSpec, t: &GroupElement, n: i64) -> Result<f64> {
    check(spec, t)?;
    Ok(ratio_at(spec, t, spec.pos(n)?).powf(-0.5))
}

/// Same value with det(I+XᵀX) from the squared-minor expansion.
pub fn hellinger_block_expansion(spec: &MeasureSpec, t: &GroupElement, n: i64) -> Result<f64> {
    check(spec, t)?;
    let x = block_matrix(spec, t, spec.pos(n)?);
    let d = det_i_plus_xtx_expansion(&x)?;
    Ok((d / (2f64.powi(spec.m as i32) * t.det().abs())).powf(-0.5))
}

/// 2^m|det t|(H⁻² − 1) written as a sum of squares:
/// (1−|d|)² + Σ_{i,j} (X_ij ∓ A_ij(X))² with the sign of det t
/// (for m=2 only the diagonal term k=1 and the pair (1,2) appear).
pub fn hellinger_bracket(spec: &MeasureSpec, t: &GroupElement, n: i64) -> Result<f64> {
    check(spec, t)?;
    Ok(bracket_at(spec, t, spec.pos(n)?))
}

fn bracket_at(spec: &MeasureSpec, t: &GroupElement, pos: usize) -> f64 {
    let d = t.det();
    let f = -d.signum();
    let x = block_matrix(spec, t, pos);
    let base = (1.0 - d.abs()).powi(2);
    match spec.m {
        1 => base,
        2 => {
            base + (x.get(0, 0) + f * x.get(1, 1)).powi(2) + (x.get(0, 1) - f * x.get(1, 0)).powi(2)
        }
        _ => {
            let a = cofactor_matrix(&x).expect("square");
            let mut s = base;
            for i in 0..spec.m {
                for j in 0..spec.m {
                    s += (x.get(i, j) + f * a.get(i, j)).powi(2);
                }
            }
            s
        }
    }
}

/// Σ_n of the centered bracket; diverges iff the centered translate is orthogonal.
pub fn centered_orthogonality(spec: &MeasureSpec, t: &GroupElement) -> Result<SeriesReport> {
    check(spec, t)?;
    if spec.m > 3 {
        return Err(MeasureError::RowCount(spec.m));
    }
    let report = window_series(spec, "centered_bracket", |p| bracket_at(spec, t, p));
    Ok(if (t.det().abs() - 1.0).abs() > 1e-12 { report.analytic(Class::Divergent) } else { report })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KakutaniReport {
    /// Σ_n −ln H_{m,n}(t)
    pub covariance: SeriesReport,
    /// Σ_n Σ_r b_rn ((t−I)a_n)_r²
    pub mean_shift: SeriesReport,
    /// Sum of both; Divergent means the translate is orthogonal.
    pub combined: SeriesReport,
    /// |det t| ≠ 1, which forces orthogonality.
    pub det_shortcut: bool,
}

/// Product test for μ^{L_t} against μ: the Hellinger log-sum of the covariance
/// blocks plus the mean-shift series.
pub fn kakutani_orthogonality(spec: &MeasureSpec, t: &GroupElement) -> Result<KakutaniReport> {
    check(spec, t)?;
    let cov_terms = par::map_range(spec.len(), |p| 0.5 * ratio_at(spec, t, p).ln().max(0.0));
    let covariance = SeriesReport::from_shells("kakutani:covariance", &shells(&cov_terms)).with_tags(&spec.tags);
    let map = MeanMap::from_element(t);
    let mean_shift = mean_series(spec, "kakutani:mean", &map);
    let mean_terms: Vec<f64> = par::map_range(spec.len(), |p| {
        let col: Vec<f64> = (1..=spec.m).map(|r| spec.a_at(r, p)).collect();
        map.apply(&col).iter().enumerate().map(|(r, v)| spec.b_at(r + 1, p) * v * v).sum()
    });
    let combined_terms: Vec<f64> = cov_terms.iter().zip(&mean_terms).map(|(x, y)| x + y).collect();
    let mut combined = SeriesReport::from_shells("kakutani", &shells(&combined_terms)).with_tags(&spec.tags);
    let det_shortcut = (t.det().abs() - 1.0).abs() > 1e-12;
    if det_shortcut {
        combined = combined.analytic(Class::Divergent);
    }
    Ok(KakutaniReport { covariance, mean_shift, combined, det_shortcut })
}

fn same_shape(p: &MeasureSpec, q: &MeasureSpec) -> Result<()> {
    if p.m != q.m || p.window != q.window {
        return Err(MeasureError::Shape("measures must share rows and window".into()));
    }
    Ok(())
}

/// Σ_{r,n} −ln H(p_rn, q_rn) for two product measures of the same shape.
pub fn kakutani_product(p: &MeasureSpec, q: &MeasureSpec) -> Result<SeriesReport> {
    same_shape(p, q)?;
    Ok(window_series(p, "kakutani_product", |i| {
        (1..=p.m)
            .map(|r| {
                let f = factor_at(p, r, i);
                let g = factor_at(q, r, i);
                -hellinger_factor(f, g, false).ln()
            })
            .sum()
    }))
}

fn factor_at(s: &MeasureSpec, r: usize, pos: usize) -> crate::GaussianFactor {
    crate::GaussianFactor { b: s.b_at(r, pos), a: s.a_at(r, pos) }
}

/// Σ_{r,n} (√(b_rn/b'_rn) − √(b'_rn/b_rn))²: the covariance-only equivalence series.
pub fn equivalence_series(p: &MeasureSpec, q: &MeasureSpec) -> Result<SeriesReport> {
    same_shape(p, q)?;
    Ok(window_series(p, "equivalence", |i| {
        (1..=p.m)
            .map(|r| {
                let x = (p.b_at(r, i) / q.b_at(r, i)).sqrt();
                (x - 1.0 / x).powi(2)
            })
            .sum()
    }))
}
