use gaussrep_kernels::KernelResult;
use gaussrep_linalg::{delta_from_gram, DenseMatrix};
use gaussrep_measures::{MeasureSpec, SeriesReport};

use crate::{DecisionError, Result};

/// Criterion of a kernel as a series: shell |k| carries the increment of the prefix
/// criterion, so partial sums are the criterion itself at |k| ≤ N/4, …, N.
pub fn kernel_report(name: &str, result: &KernelResult, simplified: bool) -> SeriesReport {
    let prefix = result.prefix_criteria(simplified);
    let mut shells = vec![0.0; result.truncation + 1];
    let mut prev = 0.0;
    for (k, v) in result.indices.iter().zip(&prefix) {
        shells[k.unsigned_abs() as usize] += v - prev;
        prev = *v;
    }
    SeriesReport::from_shells(name, &shells)
}

/// Same for Δ(f_1..f_k) of a family ordered 0, −1, 1, −2, 2, …
pub fn family_report(name: &str, family: &[Vec<f64>]) -> Result<SeriesReport> {
    let k = family.len();
    let len = family.first().map_or(0, Vec::len);
    if k == 0 || len == 0 || len % 2 == 0 || family.iter().any(|f| f.len() != len) {
        return Err(DecisionError::Invalid("family needs equal odd-length vectors".into()));
    }
    let m = len / 2;
    let mut g = vec![vec![0.0; k]; k];
    let mut shells = vec![0.0; m + 1];
    let mut prev = 0.0;
    for (shell, slot) in shells.iter_mut().enumerate() {
        let range = if shell == 0 { 0..1 } else { 2 * shell - 1..2 * shell + 1 };
        for p in range {
            for i in 0..k {
                for j in 0..k {
                    g[i][j] += family[i][p] * family[j][p];
                }
            }
        }
        let d = delta_from_gram(&DenseMatrix::from_rows(&g)?)?;
        *slot = d - prev;
        prev = d;
    }
    Ok(SeriesReport::from_shells(name, &shells))
}

/// Σ_n f(n) over the window, classified.
pub fn window_report(spec: &MeasureSpec, name: &str, f: impl Fn(usize) -> f64 + Sync + Send) -> SeriesReport {
    let terms = gaussrep_linalg::par::map_range(spec.len(), f);
    SeriesReport::from_window_terms(name, &terms).with_tags(&spec.tags)
}
