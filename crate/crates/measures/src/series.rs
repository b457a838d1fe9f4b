use gaussrep_group::{Family, GroupElement};
use gaussrep_linalg::{cofactor_matrix, par, DenseMatrix};
use serde::{Deserialize, Serialize};

use crate::kakutani::block_matrix;
use crate::report::shells;
use crate::{Class, MeasureError, MeasureSpec, Result, SeriesReport};

/// Evaluates `f` at every window position and classifies the result.
pub(crate) fn window_series<F>(spec: &MeasureSpec, name: &str, f: F) -> SeriesReport
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let terms = par::map_range(spec.len(), f);
    SeriesReport::from_shells(name, &shells(&terms)).with_tags(&spec.tags)
}

fn check_row(spec: &MeasureSpec, r: usize) -> Result<()> {
    if r == 0 || r > spec.m {
        Err(MeasureError::InvalidParam(format!("row {r} outside 1..={}", spec.m)))
    } else {
        Ok(())
    }
}

fn check_dim(spec: &MeasureSpec, t: &GroupElement) -> Result<()> {
    if t.dim() != spec.m {
        Err(MeasureError::Shape(format!("element is {}x{}, measure has {} rows", t.dim(), t.dim(), spec.m)))
    } else {
        Ok(())
    }
}

/// The linear map a ↦ (t − I)a applied to the mean columns.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanMap {
    Dense(Vec<Vec<f64>>),
    /// (t − I)_{kr} = row_k·col_r, evaluated as row_k·(col·a) so exact cancellations in col·a survive.
    RankOne { row: Vec<f64>, col: Vec<f64> },
}

impl MeanMap {
    pub fn from_element(t: &GroupElement) -> Self {
        match t.family() {
            Family::RankOne { c, s, lambda } if lambda.len() == c.len() => MeanMap::RankOne {
                row: lambda.iter().zip(s).map(|(l, sk)| l / sk).collect(),
                col: c.iter().zip(s).map(|(cr, sr)| cr * sr).collect(),
            },
            _ => {
                let m = t.dim();
                MeanMap::Dense(
                    (0..m).map(|i| (0..m).map(|j| t.get(i, j) - if i == j { 1.0 } else { 0.0 }).collect()).collect(),
                )
            }
        }
    }

    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        match self {
            MeanMap::Dense(rows) => rows.iter().map(|r| r.iter().zip(a).map(|(x, y)| x * y).sum()).collect(),
            MeanMap::RankOne { row, col } => {
                let c: f64 = col.iter().zip(a).map(|(x, y)| x * y).sum();
                row.iter().map(|r| r * c).collect()
            }
        }
    }
}

/// Σ_n Σ_r b_rn ((t − I)a_n)_r², with t the matrix multiplying the means.
pub fn sigma2_series(spec: &MeasureSpec, t: &GroupElement) -> Result<SeriesReport> {
    check_dim(spec, t)?;
    let map = MeanMap::from_element(t);
    Ok(mean_series(spec, "sigma2", &map))
}

pub(crate) fn mean_series(spec: &MeasureSpec, name: &str, map: &MeanMap) -> SeriesReport {
    window_series(spec, name, |p| {
        let col: Vec<f64> = (1..=spec.m).map(|r| spec.a_at(r, p)).collect();
        map.apply(&col).iter().enumerate().map(|(r, v)| spec.b_at(r + 1, p) * v * v).sum()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    /// det t = +1; terms (X_ij − A_ij(X))²
    Plus,
    /// det t = −1; terms (X_ij + A_ij(X))²
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => -1.0,
            Sign::Minus => 1.0,
        }
    }

    pub fn of_det(d: f64) -> Sign {
        if d >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sigma1Form {
    /// Pairs i<j only; t must satisfy det t = ±1 and t_kk = ±A^k_k(t).
    Reduced,
    /// No membership check; diagonal and lower pairs are reported too.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sigma1Report {
    pub sign: Sign,
    pub form: Sigma1Form,
    /// Σ_ij for i<j
    pub pairs: Vec<((usize, usize), SeriesReport)>,
    /// Sum over i<j.
    pub total: SeriesReport,
    /// Σ_k (t_kk ∓ A_kk(t))²; for m=2 only k=1 (the k=2 term repeats it).
    pub diagonal: Option<SeriesReport>,
    /// Σ_ij for i>j.
    pub lower: Option<SeriesReport>,
    /// Diagonal plus all ordered pairs.
    pub full: Option<SeriesReport>,
}

fn pair_term(x: &DenseMatrix, a: &DenseMatrix, i: usize, j: usize, f: f64) -> f64 {
    (x.get(i, j) + f * a.get(i, j)).powi(2)
}

/// Σ₁^± built from X_n(t) = B^{1/2} t B^{-1/2} and its cofactors.
pub fn sigma1_series(spec: &MeasureSpec, t: &GroupElement, sign: Sign, form: Sigma1Form) -> Result<Sigma1Report> {
    check_dim(spec, t)?;
    let m = spec.m;
    if !(2..=3).contains(&m) {
        return Err(MeasureError::RowCount(m));
    }
    let f = sign.factor();
    let cof_t = cofactor_matrix(t.matrix())?;
    if form == Sigma1Form::Reduced {
        let d = t.det();
        let want = -f;
        if (d - want).abs() > 1e-10 {
            return Err(MeasureError::NotInClass(format!("det t = {d}, expected {want}")));
        }
        for k in 0..m {
            if (t.get(k, k) + f * cof_t.get(k, k)).abs() > 1e-10 {
                return Err(MeasureError::NotInClass(format!("t_{0}{0} ≠ {1}A^{0}_{0}", k + 1, want)));
            }
        }
    }
    let blocks: Vec<(DenseMatrix, DenseMatrix)> = par::map_range(spec.len(), |p| {
        let x = block_matrix(spec, t, p);
        let a = cofactor_matrix(&x).expect("square");
        (x, a)
    });
    let series = |name: String, g: &dyn Fn(&DenseMatrix, &DenseMatrix) -> f64| {
        let terms: Vec<f64> = blocks.iter().map(|(x, a)| g(x, a)).collect();
        SeriesReport::from_shells(name, &shells(&terms)).with_tags(&spec.tags)
    };
    let tag = match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    };
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let r = series(format!("sigma1{tag}[{}{}]", i + 1, j + 1), &|x, a| pair_term(x, a, i, j, f));
            pairs.push(((i + 1, j + 1), r));
        }
    }
    let upper = |x: &DenseMatrix, a: &DenseMatrix| -> f64 {
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| pair_term(x, a, i, j, f)).sum()
    };
    let total = series(format!("sigma1{tag}"), &upper);
    let diag_count = if m == 2 { 1 } else { m };
    let diag = |x: &DenseMatrix, a: &DenseMatrix| -> f64 { (0..diag_count).map(|k| pair_term(x, a, k, k, f)).sum() };
    let lower = |x: &DenseMatrix, a: &DenseMatrix| -> f64 {
        (0..m).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| pair_term(x, a, i, j, f)).sum()
    };
    let (diagonal, lower_r, full) = if form == Sigma1Form::Full {
        let both = |x: &DenseMatrix, a: &DenseMatrix| diag(x, a) + upper(x, a) + if m == 3 { lower(x, a) } else { 0.0 };
        (
            Some(series(format!("sigma1{tag}[diag]"), &diag)),
            Some(series(format!("sigma1{tag}[lower]"), &lower)),
            Some(series(format!("sigma1{tag}[full]"), &both)),
        )
    } else {
        (None, None, None)
    };
    Ok(Sigma1Report { sign, form, pairs, total, diagonal, lower: lower_r, full })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub report: SeriesReport,
    /// c_n with s⁴ b_in / b_jn = 1 + c_n, window order.
    pub residues: Vec<f64>,
    /// Σ c_n²
    pub residue_squares: SeriesReport,
}

/// Σ_n (s²√(b_in/b_jn) − s⁻²√(b_jn/b_in))².
pub fn sigma_ij_scale(spec: &MeasureSpec, i: usize, j: usize, s: f64) -> Result<ScaleReport> {
    check_row(spec, i)?;
    check_row(spec, j)?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(MeasureError::InvalidParam(format!("scale s must be positive, got {s}")));
    }
    let s2 = s * s;
    let report = window_series(spec, &format!("sigma_{i}{j}(s)"), |p| {
        let q = (spec.b_at(i, p) / spec.b_at(j, p)).sqrt();
        (s2 * q - 1.0 / (s2 * q)).powi(2)
    });
    let residues: Vec<f64> = (0..spec.len()).map(|p| s2 * s2 * spec.b_at(i, p) / spec.b_at(j, p) - 1.0).collect();
    let residue_squares = SeriesReport::from_window_terms(format!("sigma_{i}{j}(s):c^2"), &residues.iter().map(|c| c * c).collect::<Vec<_>>());
    Ok(ScaleReport { report, residues, residue_squares })
}

/// Σ_n (C_i² b_in + C_j² b_jn)(C_i a_in + C_j a_jn)².
pub fn sigma_ij_mean(spec: &MeasureSpec, i: usize, j: usize, ci: f64, cj: f64) -> Result<SeriesReport> {
    check_row(spec, i)?;
    check_row(spec, j)?;
    Ok(window_series(spec, &format!("sigma_{i}{j}(C)"), |p| {
        (ci * ci * spec.b_at(i, p) + cj * cj * spec.b_at(j, p)) * (ci * spec.a_at(i, p) + cj * spec.a_at(j, p)).powi(2)
    }))
}

fn pair_products(spec: &MeasureSpec, p: usize) -> f64 {
    let mut total = 0.0;
    for r in 1..=spec.m {
        for s in r + 1..=spec.m {
            total += spec.b_at(r, p) * spec.b_at(s, p);
        }
    }
    total
}

/// Σ_n b_rn² / (b_1n b_2n + b_1n b_3n + b_2n b_3n)
pub fn s_r_series(spec: &MeasureSpec, r: usize) -> Result<SeriesReport> {
    spec.require_rows(3)?;
    s_k_general(spec, r)
}

/// Σ_n b_kn² / Σ_{r<s} b_rn b_sn for any m ≥ 2.
pub fn s_k_general(spec: &MeasureSpec, k: usize) -> Result<SeriesReport> {
    check_row(spec, k)?;
    if spec.m < 2 {
        return Err(MeasureError::RowCount(spec.m));
    }
    Ok(window_series(spec, &format!("S_{k}({})", spec.m), |p| spec.b_at(k, p).powi(2) / pair_products(spec, p)))
}

/// Σ_n (b_kn/2)(1/(2b_rn) + a_rn²)
#[allow(non_snake_case)]
pub fn sL_series(spec: &MeasureSpec, k: usize, r: usize) -> Result<SeriesReport> {
    check_row(spec, k)?;
    check_row(spec, r)?;
    if k == r {
        return Err(MeasureError::InvalidParam("k and r must differ".into()));
    }
    Ok(window_series(spec, &format!("S^L_{k}{r}"), |p| {
        spec.b_at(k, p) / 2.0 * (0.5 / spec.b_at(r, p) + spec.a_at(r, p).powi(2))
    }))
}

/// Series attached to the two-parameter family of row `row`: with (u, v) the other
/// rows in increasing order,
/// Σ [t²/4·b_row/b_u + s²/4·b_row/b_v + b_row/2·(t a_u + s a_v − 2a_row)²].
#[allow(non_snake_case)]
pub fn sL_family(spec: &MeasureSpec, row: usize, t: f64, s: f64) -> Result<SeriesReport> {
    spec.require_rows(3)?;
    check_row(spec, row)?;
    let others: Vec<usize> = (1..=3).filter(|&r| r != row).collect();
    let (u, v) = (others[0], others[1]);
    Ok(window_series(spec, &format!("S^L_{row},{u}{v}"), |p| {
        let br = spec.b_at(row, p);
        t * t / 4.0 * br / spec.b_at(u, p)
            + s * s / 4.0 * br / spec.b_at(v, p)
            + br / 2.0 * (t * spec.a_at(u, p) + s * spec.a_at(v, p) - 2.0 * spec.a_at(row, p)).powi(2)
    }))
}

/// Σ_n Σ_r b_rn (a'_rn − a_rn)²
pub fn mean_shift_equivalence(spec: &MeasureSpec, shifted_means: &[Vec<f64>]) -> Result<SeriesReport> {
    if shifted_means.len() != spec.m || shifted_means.iter().any(|r| r.len() != spec.len()) {
        return Err(MeasureError::Shape("shifted means must match rows and window".into()));
    }
    Ok(window_series(spec, "mean_shift", |p| {
        (1..=spec.m).map(|r| spec.b_at(r, p) * (shifted_means[r - 1][p] - spec.a_at(r, p)).powi(2)).sum()
    }))
}

/// 1 when Σ |a_k/b_k| classifies Convergent, else 0; sequences in window order.
pub fn zero_one_law(b: &[f64], weights: &[f64]) -> Result<(u8, SeriesReport)> {
    if b.len() != weights.len() || b.len() % 2 == 0 {
        return Err(MeasureError::Shape("b and weights must share an odd window length".into()));
    }
    if b.iter().any(|&x| !(x > 0.0)) {
        return Err(MeasureError::InvalidParam("b must be positive".into()));
    }
    let terms: Vec<f64> = b.iter().zip(weights).map(|(x, a)| (a / x).abs()).collect();
    let report = SeriesReport::from_window_terms("zero_one", &terms);
    Ok((u8::from(report.classification == Class::Convergent), report))
}

/// (Σ x/(x+y), Σ x/y) for positive sequences; both converge or both diverge.
pub fn ratio_pair(x: &[f64], y: &[f64]) -> Result<(SeriesReport, SeriesReport)> {
    if x.len() != y.len() || x.len() % 2 == 0 {
        return Err(MeasureError::Shape("sequences must share an odd window length".into()));
    }
    let t1: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / (a + b)).collect();
    let t2: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / b).collect();
    Ok((SeriesReport::from_window_terms("x/(x+y)", &t1), SeriesReport::from_window_terms("x/y", &t2)))
}
