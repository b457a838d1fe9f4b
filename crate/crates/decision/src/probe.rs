use gaussrep_linalg::{det, par, DenseMatrix};
use gaussrep_measures::{Class, SeriesReport};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::{DecisionError, Result};

const MAX_GRID_COMBINATIONS: usize = 200_000;
const DEGENERATE_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Combination {
    /// Scaled so that max |C_r| = 1 with the first nonzero entry positive.
    pub coefficients: Vec<f64>,
    /// Σ_n (Σ_r C_r f_rn)²
    pub norms: SeriesReport,
    /// Every term is exactly zero.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub count: usize,
    /// Gram matrix over the whole window.
    pub gram: Vec<Vec<f64>>,
    pub degenerate: bool,
    /// Eigenvector of the smallest Gram eigenvalue when the Gram matrix is singular.
    pub null_combination: Option<Vec<f64>>,
    /// Combination of least norm per unit coefficient length.
    pub least_squares: Combination,
    pub grid_size: usize,
    /// First combination found with bounded partial norms.
    pub bounded: Option<Combination>,
    pub exact_kernel: Option<Vec<f64>>,
    pub truncations: Vec<usize>,
    /// Γ(f_1..f_k)/Γ(f_2..f_k) at each truncation; None where the denominator vanishes.
    pub ratio_trajectory: Vec<Option<f64>>,
    pub ratio_increasing: bool,
}

pub fn default_grid() -> Vec<f64> {
    vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
}

fn normalize(c: &[f64]) -> Option<Vec<f64>> {
    let big = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if big == 0.0 || !big.is_finite() {
        return None;
    }
    let first = c.iter().copied().find(|x| *x != 0.0)?;
    let f = if first > 0.0 { 1.0 / big } else { -1.0 / big };
    Some(c.iter().map(|x| x * f).collect())
}

fn combine(vectors: &[Vec<f64>], c: &[f64]) -> Combination {
    let len = vectors[0].len();
    let terms: Vec<f64> = (0..len)
        .map(|p| {
            let v: f64 = vectors.iter().zip(c).map(|(f, ci)| ci * f[p]).sum();
            v * v
        })
        .collect();
    let exact = terms.iter().all(|t| *t == 0.0);
    let name = format!("nu{:?}", c);
    Combination { coefficients: c.to_vec(), norms: SeriesReport::from_window_terms(name, &terms), exact }
}

fn grid_combinations(k: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let c: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
        if let Some(n) = normalize(&c) {
            if !out.iter().any(|o| o.iter().zip(&n).all(|(a, b)| a.to_bits() == b.to_bits())) {
                out.push(n);
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn gram_upto(vectors: &[Vec<f64>], t: usize) -> Vec<Vec<f64>> {
    let len = vectors[0].len();
    let big_n = len / 2;
    let k = vectors.len();
    let mut g = vec![vec![0.0; k]; k];
    for p in big_n - t.min(big_n)..=big_n + t.min(big_n) {
        for i in 0..k {
            for j in 0..k {
                g[i][j] += vectors[i][p] * vectors[j][p];
            }
        }
    }
    g
}

fn gram_det(g: &[Vec<f64>], from: usize) -> Result<f64> {
    let k = g.len();
    if from >= k {
        return Ok(1.0);
    }
    let sub = DenseMatrix::from_fn(k - from, k - from, |i, j| g[i + from][j + from])?;
    Ok(det(&sub)?)
}

/// Searches for a combination Σ C_r f_r with bounded partial norms: the coefficient grid,
/// the Gram null direction and the least-norm direction. Vectors are in window order.
pub fn l2_combination_probe(vectors: &[Vec<f64>], coeff_grid: &[f64]) -> Result<ProbeReport> {
    let k = vectors.len();
    let len = vectors.first().map_or(0, Vec::len);
    if k == 0 || len == 0 || len % 2 == 0 || vectors.iter().any(|v| v.len() != len) {
        return Err(DecisionError::Invalid("probe needs equal odd-length vectors".into()));
    }
    if coeff_grid.iter().any(|x| !x.is_finite()) {
        return Err(DecisionError::Invalid("coefficient grid must be finite".into()));
    }
    let grid_total = coeff_grid.len().checked_pow(k as u32).unwrap_or(usize::MAX);
    if grid_total > MAX_GRID_COMBINATIONS {
        return Err(DecisionError::Invalid(format!("coefficient grid gives {grid_total} combinations")));
    }
    let big_n = len / 2;
    let gram = gram_upto(vectors, big_n);
    let eig = SymmetricEigen::new(DMatrix::from_fn(k, k, |i, j| gram[i][j]));
    let (mut lo, mut hi) = (0usize, 0usize);
    for i in 0..k {
        if eig.eigenvalues[i] < eig.eigenvalues[lo] {
            lo = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[hi] {
            hi = i;
        }
    }
    let (min_ev, max_ev) = (eig.eigenvalues[lo], eig.eigenvalues[hi]);
    let degenerate = k > 1 && (max_ev <= 0.0 || min_ev <= DEGENERATE_RATIO * max_ev);
    let smallest: Vec<f64> = if max_ev > 0.0 {
        eig.eigenvectors.column(lo).iter().copied().collect()
    } else {
        (0..k).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect()
    };
    let smallest = normalize(&smallest).unwrap_or_else(|| smallest.clone());
    let null_combination = (degenerate && max_ev > 0.0).then(|| smallest.clone());
    let least_squares = combine(vectors, &smallest);

    let combos = if coeff_grid.is_empty() { Vec::new() } else { grid_combinations(k, coeff_grid) };
    let evaluated: Vec<Combination> = par::map_slice(&combos, |c| combine(vectors, c));
    let exact_grid = evaluated.iter().find(|c| c.exact).cloned();
    let best_grid = evaluated
        .iter()
        .filter(|c| c.norms.classification == Class::Convergent)
        .min_by(|a, b| a.norms.total().total_cmp(&b.norms.total()))
        .cloned();
    let null_comb = null_combination.as_ref().map(|c| combine(vectors, c));
    let exact_kernel = exact_grid
        .as_ref()
        .or(null_comb.as_ref().filter(|c| c.exact))
        .map(|c| c.coefficients.clone());
    let bounded = exact_grid
        .or_else(|| null_comb.filter(|c| c.norms.classification == Class::Convergent))
        .or_else(|| Some(least_squares.clone()).filter(|c| c.norms.classification == Class::Convergent))
        .or(best_grid);

    let truncations: Vec<usize> = (1..=4).map(|j| (big_n * j / 4).max(1)).collect();
    let mut ratio_trajectory = Vec::new();
    for &t in &truncations {
        let g = gram_upto(vectors, t);
        let num = gram_det(&g, 0)?;
        let den = gram_det(&g, 1)?;
        let scale: f64 = (1..k).map(|i| g[i][i]).product::<f64>().max(f64::MIN_POSITIVE);
        ratio_trajectory.push((den > 1e-12 * scale).then(|| num / den));
    }
    let ratio_increasing = ratio_trajectory.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b > a));

    Ok(ProbeReport {
        count: k,
        gram,
        degenerate,
        null_combination,
        least_squares,
        grid_size: combos.len(),
        bounded,
        exact_kernel,
        truncations,
        ratio_trajectory,
        ratio_increasing,
    })
}
