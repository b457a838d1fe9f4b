use gaussrep_group::{Family, GroupElement};
use gaussrep_measures::{
    centered_orthogonality, kakutani_orthogonality, sigma1_series, sigma2_series, Class, MeasureSpec, SeriesReport, Sigma1Form,
    Sign, Source,
};
use serde::{Deserialize, Serialize};

use crate::Result;

const IDENTITY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementSummary {
    pub family: Family,
    pub matrix: Vec<Vec<f64>>,
    pub det: f64,
}

impl ElementSummary {
    pub fn of(t: &GroupElement) -> Self {
        ElementSummary { family: t.family().clone(), matrix: t.matrix().to_rows(), det: t.det() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub element: ElementSummary,
    /// |det t| ≠ 1
    pub det_shortcut: bool,
    /// Full Σ₁ with the sign of det t.
    pub sigma1: Option<SeriesReport>,
    pub sigma2: Option<SeriesReport>,
    /// Centered Hellinger bracket, a cross-check of Σ₁.
    pub centered: Option<SeriesReport>,
    pub kakutani: SeriesReport,
    /// Σ₁ + Σ₂; Divergent means μ^{L_t} ⊥ μ.
    pub report: SeriesReport,
}

impl SweepEntry {
    pub fn class(&self) -> Class {
        self.report.classification
    }
}

fn sum_reports(name: &str, a: &SeriesReport, b: &SeriesReport) -> SeriesReport {
    let partial_sums: Vec<f64> = a.partial_sums.iter().zip(&b.partial_sums).map(|(x, y)| x + y).collect();
    let total = partial_sums.last().copied().unwrap_or(0.0);
    let tail = total - partial_sums.get(2).copied().unwrap_or(0.0);
    let classification = match (a.classification, b.classification) {
        (Class::Divergent, _) | (_, Class::Divergent) => Class::Divergent,
        (Class::Convergent, Class::Convergent) => Class::Convergent,
        _ => Class::Inconclusive,
    };
    let source = if a.source == b.source { a.source } else { Source::Heuristic };
    SeriesReport {
        name: name.to_string(),
        window: a.window,
        truncations: a.truncations.clone(),
        partial_sums,
        growth_exponent_estimate: a.growth_exponent_estimate.max(b.growth_exponent_estimate),
        term_decay_exponent: a.term_decay_exponent.min(b.term_decay_exponent),
        tail_share: if total != 0.0 { tail / total } else { 0.0 },
        classification,
        source,
    }
}

/// Σ₁^± and Σ₂ for one element, with the |det t| ≠ 1 shortcut.
pub fn sweep_element(spec: &MeasureSpec, t: &GroupElement) -> Result<SweepEntry> {
    let kak = kakutani_orthogonality(spec, t)?;
    let element = ElementSummary::of(t);
    if kak.det_shortcut {
        let report = kak.combined.clone();
        return Ok(SweepEntry {
            element,
            det_shortcut: true,
            sigma1: None,
            sigma2: None,
            centered: None,
            kakutani: kak.combined,
            report,
        });
    }
    let s1 = sigma1_series(spec, t, Sign::of_det(t.det()), Sigma1Form::Full)?;
    let sigma1 = s1.full.unwrap_or(s1.total);
    let sigma2 = sigma2_series(spec, t)?;
    let centered = centered_orthogonality(spec, t)?;
    let report = sum_reports("sigma1+sigma2", &sigma1, &sigma2);
    Ok(SweepEntry {
        element,
        det_shortcut: false,
        sigma1: Some(sigma1),
        sigma2: Some(sigma2),
        centered: Some(centered),
        kakutani: kak.combined,
        report,
    })
}

/// Orthogonality evidence for every non-identity element, in input order.
pub fn orthogonality_sweep(spec: &MeasureSpec, elements: &[GroupElement]) -> Result<Vec<SweepEntry>> {
    elements.iter().filter(|t| !t.is_identity(IDENTITY_TOL)).map(|t| sweep_element(spec, t)).collect()
}
