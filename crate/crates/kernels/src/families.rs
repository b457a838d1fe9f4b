use gaussrep_linalg::{delta_functional, par};
use gaussrep_measures::MeasureSpec;
use serde::{Deserialize, Serialize};

use crate::build::{ordered_indices, roles};
use crate::system::trajectory_points;
use crate::{KernelError, KernelResult, KernelSpec, Result};

fn check(spec: &MeasureSpec, r: usize, m: usize) -> Result<()> {
    spec.require_rows(3)?;
    if !(1..=3).contains(&r) {
        return Err(KernelError::InvalidParams(format!("row {r} outside 1..3")));
    }
    if m == 0 || m > spec.window {
        return Err(KernelError::TruncationTooLarge { truncation: m, window: spec.window });
    }
    Ok(())
}

fn family(spec: &MeasureSpec, m: usize, f: impl Fn(usize) -> [f64; 3]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(), Vec::new(), Vec::new()];
    for k in ordered_indices(m, &[]) {
        let v = f((k + spec.window as i64) as usize);
        for (col, x) in out.iter_mut().zip(v) {
            col.push(x);
        }
    }
    out
}

/// (Y_r, Y_i, Y_j) with Y_s = a_s/√λ, λ = Σ 1/2b, rows in cyclic order from r.
pub fn d_family(spec: &MeasureSpec, r: usize, m: usize) -> Result<Vec<Vec<f64>>> {
    check(spec, r, m)?;
    let (r, i, j) = roles(r);
    Ok(family(spec, m, |p| {
        let l: f64 = (1..=3).map(|s| 0.5 / spec.b_at(s, p)).sum::<f64>().sqrt();
        [spec.a_at(r, p) / l, spec.a_at(i, p) / l, spec.a_at(j, p) / l]
    }))
}

/// (Y_r^{(r)}, Y_i^{(r)}, Y_j^{(r)}) with Y_s^{(r)} = b_s/√λ^{(r)}.
pub fn xx_family(spec: &MeasureSpec, r: usize, m: usize) -> Result<Vec<Vec<f64>>> {
    check(spec, r, m)?;
    let (r, i, j) = roles(r);
    Ok(family(spec, m, |p| {
        let b = |s| spec.b_at(s, p);
        let sum = b(1) + b(2) + b(3);
        let l = (sum * sum - b(i).powi(2) - b(j).powi(2)).sqrt();
        [b(r) / l, b(i) / l, b(j) / l]
    }))
}

/// (Y_rr, Y_ri, Y_rj) of the x_r·A kernel.
pub fn dx_family(spec: &MeasureSpec, r: usize, m: usize) -> Result<Vec<Vec<f64>>> {
    check(spec, r, m)?;
    let (r, i, j) = roles(r);
    Ok(family(spec, m, |p| {
        let a = |s| spec.a_at(s, p);
        let c = 0.5 / spec.b_at(r, p) + a(r).powi(2);
        let inv: f64 = (1..=3).map(|s| 0.5 / spec.b_at(s, p)).sum();
        let o = a(i).powi(2) + a(j).powi(2);
        let l = (c * (inv + o) - a(r).powi(2) * o).sqrt();
        [c / l, a(r) * a(i) / l, a(r) * a(j) / l]
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaTrajectory {
    pub truncations: Vec<usize>,
    pub values: Vec<f64>,
}

impl DeltaTrajectory {
    pub fn last(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Δ of a family whose entries are ordered 0, −1, 1, … (as built above),
/// evaluated on the truncations |k| ≤ M'.
pub fn delta_trajectory(family: &[Vec<f64>], m: usize) -> Result<DeltaTrajectory> {
    let truncations = trajectory_points(m);
    let values = truncations
        .iter()
        .map(|&t| {
            let len = (2 * t + 1).min(family[0].len());
            let pre: Vec<Vec<f64>> = family.iter().map(|f| f[..len].to_vec()).collect();
            delta_functional(&pre).map_err(KernelError::from)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DeltaTrajectory { truncations, values })
}

/// Runs many kernels over one spec; output order matches input order.
pub fn run_batch(spec: &MeasureSpec, specs: &[KernelSpec]) -> Vec<Result<KernelResult>> {
    par::map_slice(specs, |ks| crate::run_kernel(spec, ks))
}
