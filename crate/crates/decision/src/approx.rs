use std::collections::{BTreeMap, BTreeSet};

use gaussrep_group::{is_involution, is_orthogonal, orthogonal_from_rankone, GroupElement};
use gaussrep_kernels::{run_kernel, KernelError, KernelKind, KernelSpec, Phase, TrajectoryPoint};
use gaussrep_linalg::par;
use gaussrep_measures::{Class, MeasureSpec, SeriesReport};
use serde::{Deserialize, Serialize};

use crate::classify::CaseClassification;
use crate::criteria::kernel_report;
use crate::pattern::{tail_limit, Limit};
use crate::probe::{default_grid, l2_combination_probe, ProbeReport};
use crate::sweep::{sweep_element, ElementSummary, SweepEntry};
use crate::{DecisionError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    IrreducibleEvidence,
    ReducibleWitness,
    Inconclusive,
}

/// An operator to approximate: x_r, D_r, or x_px_p + x_qx_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operator {
    X(usize),
    D(usize),
    PairSum(usize, usize),
}

impl Operator {
    pub fn name(self) -> String {
        match self {
            Operator::X(r) => format!("x{r}"),
            Operator::D(r) => format!("D{r}"),
            Operator::PairSum(p, q) => format!("x{p}x{p}+x{q}x{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionStatus {
    Evaluated,
    Infeasible,
    /// Its prerequisite operator was not approximable.
    Skipped,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub name: String,
    pub operator: String,
    pub kernel: KernelKind,
    /// Row of the kernel in the given row order.
    pub row: usize,
    pub requires: Option<String>,
    pub status: CriterionStatus,
    pub note: Option<String>,
    /// Simplified criterion as a series of shell increments.
    pub report: Option<SeriesReport>,
    pub criterion_value: Option<f64>,
    pub criterion_simplified: Option<f64>,
    pub residual_min: Option<f64>,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl CriterionEntry {
    pub fn class(&self) -> Option<Class> {
        self.report.as_ref().map(|r| r.classification)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub element: ElementSummary,
    #[serde(skip)]
    pub group_element: Option<GroupElement>,
    /// Mean combination C with Σ_r C_r a_r square-summable.
    pub combination: Vec<f64>,
    pub scales: Vec<f64>,
    pub lambda: Vec<f64>,
    pub involution: bool,
    pub orthogonal: bool,
    pub sweep: SweepEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxVerdict {
    pub truncation: usize,
    pub case_label: String,
    pub approximable: Vec<String>,
    pub triplets: Vec<[String; 3]>,
    pub per_criterion: BTreeMap<String, CriterionEntry>,
    pub probe: Option<ProbeReport>,
    /// Rank-one elements tried as witnesses, with their sweep results.
    pub candidates: Vec<SweepEntry>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

struct Plan {
    name: String,
    op: Operator,
    requires: Option<Operator>,
    kernel: KernelSpec,
    /// Given row placed at each kernel row.
    order: [usize; 3],
}

fn plans(spec: &MeasureSpec, m: usize) -> Vec<Plan> {
    let id = [1, 2, 3];
    let ks = |kind, r| KernelSpec::new(kind, r, 0, m);
    let mut out = Vec::new();
    for r in 1..=3 {
        out.push(Plan {
            name: format!("Delta^({r})"),
            op: Operator::X(r),
            requires: None,
            kernel: ks(KernelKind::XxByAa, r).with_partner(1),
            order: id,
        });
        out.push(Plan { name: format!("Delta_{r}"), op: Operator::D(r), requires: None, kernel: ks(KernelKind::DByA, r), order: id });
        out.push(Plan {
            name: format!("Sigma_{r}"),
            op: Operator::X(r),
            requires: Some(Operator::D(r)),
            kernel: ks(KernelKind::XByDa, r),
            order: id,
        });
        let dependent = [
            (format!("Delta_{r}{r}"), ks(KernelKind::DByXa, r)),
            (format!("Sigma_{r}(mu)"), ks(KernelKind::XByShiftedXa, r)),
            (format!("Delta_{r}(exp)"), ks(KernelKind::DByExpA, r).with_phase(Phase::Matched { ratio: 2f64.sqrt() })),
            (format!("Sigma_{r}(D,s)"), ks(KernelKind::DBySinA, r).with_phase(Phase::Matched { ratio: 1.0 })),
            (format!("Sigma_{r}^v(D,s)"), ks(KernelKind::DByCosA, r).with_phase(Phase::Matched { ratio: 1.0 })),
        ];
        for (name, kernel) in dependent {
            out.push(Plan { name, op: Operator::D(r), requires: Some(Operator::X(r)), kernel, order: id });
        }
    }
    for (o, p, q) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
        let equal = (0..spec.len()).all(|i| (spec.b_at(p, i) - spec.b_at(q, i)).abs() <= 1e-12 * spec.b_at(p, i));
        if !equal {
            continue;
        }
        let pair = Operator::PairSum(p, q);
        let suffix = if (p, q) == (2, 3) { String::new() } else { format!("[{p}{q}]") };
        let order = [o, p, q];
        out.push(Plan {
            name: format!("XXplusXX{suffix}"),
            op: pair,
            requires: None,
            kernel: ks(KernelKind::XxPlusXx, 1).with_partner(1),
            order,
        });
        for (given, row) in [(p, 2), (q, 3)] {
            out.push(Plan {
                name: format!("sigma_{given}{suffix}"),
                op: Operator::X(given),
                requires: Some(pair),
                kernel: ks(KernelKind::XFromPairs, row),
                order,
            });
        }
    }
    out
}

fn reorder(spec: &MeasureSpec, order: [usize; 3]) -> Result<MeasureSpec> {
    if order == [1, 2, 3] {
        return Ok(spec.clone());
    }
    let b = order.iter().map(|&r| spec.b_row(r).to_vec()).collect();
    let a = order.iter().map(|&r| spec.a_row(r).to_vec()).collect();
    Ok(MeasureSpec::new(b, a)?.with_tag_map(spec.tags.clone()))
}

fn evaluate(spec: &MeasureSpec, plan: &Plan) -> CriterionEntry {
    let mut entry = CriterionEntry {
        name: plan.name.clone(),
        operator: plan.op.name(),
        kernel: plan.kernel.kind,
        row: plan.order[plan.kernel.row - 1],
        requires: plan.requires.map(Operator::name),
        status: CriterionStatus::Evaluated,
        note: None,
        report: None,
        criterion_value: None,
        criterion_simplified: None,
        residual_min: None,
        trajectory: Vec::new(),
    };
    let run = reorder(spec, plan.order).and_then(|s| run_kernel(&s, &plan.kernel).map_err(DecisionError::from));
    match run {
        Ok(res) => {
            entry.report = Some(kernel_report(&plan.name, &res, true).with_tags(&spec.tags));
            entry.criterion_value = Some(res.criterion_value);
            entry.criterion_simplified = Some(res.criterion_simplified);
            entry.residual_min = Some(res.residual_min);
            entry.trajectory = res.trajectory;
        }
        Err(DecisionError::Kernel(KernelError::Infeasible { norm })) => {
            entry.status = CriterionStatus::Infeasible;
            entry.note = Some(format!("constraint vanishes (norm {norm:e})"));
        }
        Err(e) => {
            entry.status = CriterionStatus::Failed;
            entry.note = Some(e.to_string());
        }
    }
    entry
}

/// Runs the approximation criteria to a fixed point: a criterion whose prerequisite
/// operator is approximable is evaluated once that operator is known to be.
pub fn approximable_triplets(spec: &MeasureSpec, classification: &CaseClassification, m: usize) -> Result<ApproxVerdict> {
    spec.require_rows(3)?;
    if spec.m != 3 {
        return Err(DecisionError::Invalid(format!("needs m = 3, got {}", spec.m)));
    }
    if m == 0 || m > spec.window {
        return Err(DecisionError::Invalid(format!("truncation {m} must lie in 1..={}", spec.window)));
    }
    let plans = plans(spec, m);
    let mut approx: BTreeSet<Operator> = BTreeSet::new();
    let mut entries: BTreeMap<String, CriterionEntry> = BTreeMap::new();
    loop {
        let ready: Vec<&Plan> = plans
            .iter()
            .filter(|p| !entries.contains_key(&p.name) && p.requires.is_none_or(|r| approx.contains(&r)))
            .collect();
        if ready.is_empty() {
            break;
        }
        let done = par::map_slice(&ready, |p| evaluate(spec, p));
        for (plan, entry) in ready.iter().zip(done) {
            if entry.class() == Some(Class::Divergent) {
                approx.insert(plan.op);
            }
            entries.insert(plan.name.clone(), entry);
        }
    }
    for plan in &plans {
        entries.entry(plan.name.clone()).or_insert_with(|| CriterionEntry {
            name: plan.name.clone(),
            operator: plan.op.name(),
            kernel: plan.kernel.kind,
            row: plan.order[plan.kernel.row - 1],
            requires: plan.requires.map(Operator::name),
            status: CriterionStatus::Skipped,
            note: plan.requires.map(|r| format!("{} not approximable", r.name())),
            report: None,
            criterion_value: None,
            criterion_simplified: None,
            residual_min: None,
            trajectory: Vec::new(),
        });
    }

    let mut triplets = Vec::new();
    for mask in 0..8usize {
        let ops: Vec<Operator> =
            (1..=3).map(|r| if mask & (1 << (r - 1)) != 0 { Operator::D(r) } else { Operator::X(r) }).collect();
        if ops.iter().all(|o| approx.contains(o)) {
            triplets.push([ops[0].name(), ops[1].name(), ops[2].name()]);
        }
    }

    let (probe, candidates, witness) = witness_search(spec)?;
    let verdict = if witness.is_some() {
        Verdict::ReducibleWitness
    } else if !triplets.is_empty() {
        Verdict::IrreducibleEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(ApproxVerdict {
        truncation: m,
        case_label: classification.label(),
        approximable: approx.iter().map(|o| o.name()).collect(),
        triplets,
        per_criterion: entries,
        probe,
        candidates,
        verdict,
        witness,
    })
}

/// Scale vectors to try: s = 1 and, when every b_r/b_1 has a positive limit L_r, s_r = L_r^{±1/2}.
fn candidate_scales(spec: &MeasureSpec) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0; 3]];
    let limits: Vec<Option<f64>> = (2..=3)
        .map(|r| match tail_limit(spec, "", |p| spec.b_at(r, p) / spec.b_at(1, p)).limit {
            Limit::Positive { value } => Some(value),
            _ => None,
        })
        .collect();
    if let [Some(l2), Some(l3)] = limits[..] {
        for e in [0.5, -0.5] {
            let s = vec![1.0, l2.powf(e), l3.powf(e)];
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

type Search = (Option<ProbeReport>, Vec<SweepEntry>, Option<Witness>);

/// A square-summable mean combination C gives the rank-one orthogonal t with
/// (t − I)a ∝ Σ C_r a_r; t is a witness when its Σ₁ and Σ₂ both converge.
fn witness_search(spec: &MeasureSpec) -> Result<Search> {
    let vectors: Vec<Vec<f64>> =
        (1..=3).map(|r| (0..spec.len()).map(|p| spec.b_at(1, p).sqrt() * spec.a_at(r, p)).collect()).collect();
    if vectors.iter().flatten().all(|x| *x == 0.0) {
        return Ok((None, Vec::new(), None));
    }
    let probe = l2_combination_probe(&vectors, &default_grid())?;
    let Some(comb) = probe.bounded.clone() else {
        return Ok((Some(probe), Vec::new(), None));
    };
    let mut candidates = Vec::new();
    for s in candidate_scales(spec) {
        let c: Vec<f64> = comb.coefficients.iter().zip(&s).map(|(ci, si)| ci / si).collect();
        let rank = orthogonal_from_rankone(&c, &s)?;
        let entry = sweep_element(spec, &rank.element)?;
        let ok = entry.sigma1.as_ref().is_some_and(|r| r.classification == Class::Convergent)
            && entry.sigma2.as_ref().is_some_and(|r| r.classification == Class::Convergent);
        if ok {
            let t = rank.element;
            let witness = Witness {
                element: ElementSummary::of(&t),
                involution: is_involution(&t),
                orthogonal: is_orthogonal(t.matrix(), 1e-12),
                group_element: Some(t),
                combination: comb.coefficients.clone(),
                scales: s,
                lambda: rank.lambda,
                sweep: entry.clone(),
            };
            candidates.push(entry);
            return Ok((Some(probe), candidates, Some(witness)));
        }
        candidates.push(entry);
    }
    Ok((Some(probe), candidates, None))
}
