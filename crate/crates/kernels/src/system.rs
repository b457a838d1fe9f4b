use gaussrep_linalg::{gram_system_quadform, GramSystem, FEASIBILITY_EPS};
use serde::{Deserialize, Serialize};

use crate::{KernelError, KernelKind, Result};

/// Gram data for one kernel: exact entries and the simplified ("~") entries,
/// indexed by generator index sorted by |k| so prefixes are truncations.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Assembled {
    pub indices: Vec<i64>,
    pub lambda: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
    pub constraint: Vec<f64>,
    pub constraint_im: Option<Vec<f64>>,
    pub lambda_simplified: Vec<f64>,
    pub generators_simplified: Vec<Vec<f64>>,
    pub constraint_simplified: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub truncation: usize,
    /// None while the constraint still vanishes on the prefix.
    pub residual_min: Option<f64>,
    pub criterion_value: f64,
    pub criterion_simplified: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelResult {
    pub kind: KernelKind,
    pub row: usize,
    pub target: i64,
    pub partner: Option<i64>,
    pub truncation: usize,
    pub indices: Vec<i64>,
    /// Exact diagonal shift λ_k.
    pub gram_diag: Vec<f64>,
    pub generator_dim: usize,
    pub generators: Vec<Vec<f64>>,
    pub constraint: Vec<f64>,
    pub constraint_im: Option<Vec<f64>>,
    pub lambda_simplified: Vec<f64>,
    pub generators_simplified: Vec<Vec<f64>>,
    pub constraint_simplified: Vec<f64>,
    /// min ‖Σ t_k f_k − target‖² over the truncation; equals 1/criterion_value.
    pub residual_min: f64,
    /// (A⁻¹c, c) for the exact system, i.e. Δ of the exact rescaled family.
    pub criterion_value: f64,
    /// Δ of the simplified Y-family.
    pub criterion_simplified: f64,
    pub residual_simplified: f64,
    pub diagonal: bool,
    pub feasible: bool,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl KernelResult {
    pub fn criterion_trajectory(&self) -> Vec<f64> {
        self.trajectory.iter().map(|p| p.criterion_simplified).collect()
    }

    pub fn residual_trajectory(&self) -> Vec<Option<f64>> {
        self.trajectory.iter().map(|p| p.residual_min).collect()
    }

    /// Criterion after each generator prefix (index order), exact or simplified.
    pub fn prefix_criteria(&self, simplified: bool) -> Vec<f64> {
        let (lambda, gens, cons) = if simplified {
            (&self.lambda_simplified, &self.generators_simplified, &self.constraint_simplified)
        } else {
            (&self.gram_diag, &self.generators, &self.constraint)
        };
        let mut parts = vec![PrefixQuad::new(self.generator_dim)];
        if self.constraint_im.is_some() {
            parts.push(PrefixQuad::new(self.generator_dim));
        }
        (0..lambda.len())
            .map(|k| {
                let w = 1.0 / lambda[k];
                parts[0].push(w, cons[k], &gens[k]);
                if let Some(im) = &self.constraint_im {
                    parts[1].push(w, im[k], &gens[k]);
                }
                parts.iter().map(PrefixQuad::value).sum()
            })
            .collect()
    }

    /// Dense exact Gram matrix A = diag(λ) + γ(g) for oracle checks.
    pub fn dense_gram(&self) -> Result<gaussrep_linalg::DenseMatrix> {
        Ok(GramSystem::new(self.gram_diag.clone(), self.generators.clone())?.to_dense())
    }
}

/// Running (A⁻¹c, c) for A = diag(λ) + GGᵀ over growing prefixes:
/// Σc²/λ − uᵀ(I + K)⁻¹u with u = GᵀΛ⁻¹c and K = GᵀΛ⁻¹G.
struct PrefixQuad {
    s0: f64,
    u: Vec<f64>,
    k: Vec<Vec<f64>>,
}

impl PrefixQuad {
    fn new(d: usize) -> Self {
        PrefixQuad { s0: 0.0, u: vec![0.0; d], k: vec![vec![0.0; d]; d] }
    }

    fn push(&mut self, w: f64, c: f64, g: &[f64]) {
        self.s0 += w * c * c;
        for i in 0..g.len() {
            self.u[i] += w * c * g[i];
            for j in 0..g.len() {
                self.k[i][j] += w * g[i] * g[j];
            }
        }
    }

    fn value(&self) -> f64 {
        let d = self.u.len();
        if d == 0 {
            return self.s0;
        }
        // I + K is SPD; plain elimination is enough at this size
        let mut m: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut row: Vec<f64> = (0..d).map(|j| self.k[i][j] + if i == j { 1.0 } else { 0.0 }).collect();
                row.push(self.u[i]);
                row
            })
            .collect();
        for p in 0..d {
            for r in p + 1..d {
                let f = m[r][p] / m[p][p];
                for c in p..=d {
                    m[r][c] -= f * m[p][c];
                }
            }
        }
        let mut x = vec![0.0; d];
        for p in (0..d).rev() {
            let tail: f64 = (p + 1..d).map(|c| m[p][c] * x[c]).sum();
            x[p] = (m[p][d] - tail) / m[p][p];
        }
        self.s0 - x.iter().zip(&self.u).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Truncation points: every M' up to 64, otherwise 64 log-spaced values ending at M.
pub fn trajectory_points(m: usize) -> Vec<usize> {
    if m <= 64 {
        return (1..=m).collect();
    }
    let mut pts: Vec<usize> = (0..64)
        .map(|i| ((m as f64).powf(i as f64 / 63.0)).round() as usize)
        .map(|v| v.clamp(1, m))
        .collect();
    pts.dedup();
    pts
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn prefix_quad(lambda: &[f64], gens: &[Vec<f64>], c: &[f64], checked: bool) -> Result<f64> {
    let sys = GramSystem::new(lambda.to_vec(), gens.to_vec())?;
    Ok(if checked { gram_system_quadform(&sys, c)? } else { sys.quadform_woodbury(c)? })
}

impl Assembled {
    fn quad(&self, len: usize, checked: bool) -> Result<(f64, f64)> {
        let mut exact = prefix_quad(&self.lambda[..len], &self.generators[..len], &self.constraint[..len], checked)?;
        let mut simple = prefix_quad(
            &self.lambda_simplified[..len],
            &self.generators_simplified[..len],
            &self.constraint_simplified[..len],
            checked,
        )?;
        if let Some(im) = &self.constraint_im {
            exact += prefix_quad(&self.lambda[..len], &self.generators[..len], &im[..len], checked)?;
            simple += prefix_quad(&self.lambda_simplified[..len], &self.generators_simplified[..len], &im[..len], checked)?;
        }
        Ok((exact, simple))
    }

    fn constraint_norm(&self, len: usize) -> f64 {
        let re = norm(&self.constraint[..len]);
        let im = self.constraint_im.as_ref().map_or(0.0, |v| norm(&v[..len]));
        re.hypot(im)
    }

    pub fn solve(self, kind: KernelKind, row: usize, target: i64, partner: Option<i64>, m: usize) -> Result<KernelResult> {
        let n = self.indices.len();
        let total = self.constraint_norm(n);
        if total < FEASIBILITY_EPS {
            return Err(KernelError::Infeasible { norm: total });
        }
        for (k, l) in self.indices.iter().zip(&self.lambda) {
            if !(*l > 0.0) {
                return Err(KernelError::NonPositive { index: *k, value: *l });
            }
        }
        let mut trajectory = Vec::new();
        for t in trajectory_points(m) {
            let len = self.indices.iter().take_while(|k| k.unsigned_abs() as usize <= t).count();
            let point = if len == 0 || self.constraint_norm(len) < FEASIBILITY_EPS {
                TrajectoryPoint { truncation: t, residual_min: None, criterion_value: 0.0, criterion_simplified: 0.0 }
            } else {
                let (q, qs) = self.quad(len, false)?;
                TrajectoryPoint { truncation: t, residual_min: Some(1.0 / q), criterion_value: q, criterion_simplified: qs }
            };
            trajectory.push(point);
        }
        let (q, qs) = self.quad(n, true)?;
        let dim = self.generators.first().map_or(0, |g| g.len());
        Ok(KernelResult {
            kind,
            row,
            target,
            partner,
            truncation: m,
            indices: self.indices,
            gram_diag: self.lambda,
            generator_dim: dim,
            generators: self.generators,
            constraint: self.constraint,
            constraint_im: self.constraint_im,
            lambda_simplified: self.lambda_simplified,
            generators_simplified: self.generators_simplified,
            constraint_simplified: self.constraint_simplified,
            residual_min: 1.0 / q,
            criterion_value: q,
            criterion_simplified: qs,
            residual_simplified: 1.0 / qs,
            diagonal: dim == 0,
            feasible: true,
            trajectory,
        })
    }
}
