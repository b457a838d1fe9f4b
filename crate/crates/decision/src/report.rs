use gaussrep_group::{elementary, reflected, reflection, two_param, GroupElement};
use gaussrep_measures::MeasureSpec;
use serde::{Deserialize, Serialize};

use crate::approx::{approximable_triplets, ApproxVerdict};
use crate::classify::{classify_case, CaseClassification};
use crate::sweep::{orthogonality_sweep, SweepEntry};
use crate::Result;

/// Everything computed for one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub m: usize,
    pub window: usize,
    pub truncation: usize,
    pub classification: CaseClassification,
    pub approximation: ApproxVerdict,
    pub sweep: Vec<SweepEntry>,
}

/// Elementary matrices I + E_kn, the two-parameter elements e_r(1,1), their reflected
/// versions and the coordinate reflections.
pub fn minimal_elements() -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for n in 1..=3 {
            if k != n {
                out.push(elementary(3, k, n, 1.0)?);
            }
        }
    }
    for r in 1..=3 {
        out.push(two_param(r, 1.0, 1.0)?);
        out.push(reflected(r, 1.0, 1.0)?);
        out.push(reflection(3, r)?);
    }
    Ok(out)
}

pub fn audit(spec: &MeasureSpec, truncation: usize, elements: &[GroupElement]) -> Result<AuditReport> {
    let classification = classify_case(spec)?;
    let approximation = approximable_triplets(spec, &classification, truncation)?;
    let sweep = orthogonality_sweep(spec, elements)?;
    Ok(AuditReport { m: spec.m, window: spec.window, truncation, classification, approximation, sweep })
}
