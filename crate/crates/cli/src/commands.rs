use gaussrep_decision::{
    approximable_triplets, audit, classify_case, minimal_elements, orthogonality_sweep, pattern_string, ApproxVerdict,
    AuditReport, CaseClassification, SweepEntry,
};
use gaussrep_group::{random_orthogonal, GroupElement};
use gaussrep_kernels::{run_kernel, xx_family, KernelError, KernelKind, KernelResult, KernelSpec, Phase, TrajectoryPoint};
use gaussrep_linalg::delta_functional;
use gaussrep_measures::{named_example, sigma2_series, MeasureSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Common, ExampleName};

const DEFAULT_WINDOW: usize = 1000;

#[derive(Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    CheckOrthogonality { window: usize, entries: Vec<SweepEntry> },
    Classify { window: usize, classification: CaseClassification },
    Kernel { window: usize, kernel: KernelSummary },
    KernelPlan { window: usize, approximation: ApproxVerdict },
    RunExample { example: String, headline: Vec<Headline>, audit: AuditReport },
    VerifyLemma(crate::lemmas::LemmaReport),
}

#[derive(Debug, Serialize)]
pub struct KernelSummary {
    pub kind: KernelKind,
    pub row: usize,
    pub target: i64,
    pub partner: Option<i64>,
    pub truncation: usize,
    pub generator_dim: usize,
    pub diagonal: bool,
    pub residual_min: f64,
    pub criterion_value: f64,
    pub criterion_simplified: f64,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl From<&KernelResult> for KernelSummary {
    fn from(r: &KernelResult) -> Self {
        KernelSummary {
            kind: r.kind,
            row: r.row,
            target: r.target,
            partner: r.partner,
            truncation: r.truncation,
            generator_dim: r.generator_dim,
            diagonal: r.diagonal,
            residual_min: r.residual_min,
            criterion_value: r.criterion_value,
            criterion_simplified: r.criterion_simplified,
            trajectory: r.trajectory.clone(),
        }
    }
}

/// A computed value next to the value the theory predicts for it.
#[derive(Debug, Serialize)]
pub struct Headline {
    pub quantity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_label: Option<String>,
}

impl Headline {
    fn number(quantity: &str, value: f64, expected: f64) -> Self {
        Headline { quantity: quantity.into(), value: Some(value), label: None, expected_value: Some(expected), expected_label: None }
    }

    fn text(quantity: &str, label: String, expected: &str) -> Self {
        Headline { quantity: quantity.into(), value: None, label: Some(label), expected_value: None, expected_label: Some(expected.into()) }
    }
}

pub struct Failure {
    pub report: Option<Report>,
    pub error: CliError,
}

impl From<CliError> for Failure {
    fn from(error: CliError) -> Self {
        Failure { report: None, error }
    }
}

pub type Outcome = Result<Report, Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    CliError::Invalid(e.to_string()).into()
}

pub fn load_spec(c: &Common) -> Result<MeasureSpec, Failure> {
    let spec = match (&c.spec, c.example) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            MeasureSpec::from_json(&text).map_err(invalid)?
        }
        (None, Some(name)) => named_example(name.id(), c.window.unwrap_or(DEFAULT_WINDOW)).map_err(invalid)?,
        (Some(_), Some(_)) => return Err(invalid("give either --spec or --example, not both")),
        (None, None) => return Err(invalid("a measure is required: --spec PATH or --example NAME")),
    };
    match c.window {
        Some(0) => Err(invalid("window must be at least 1")),
        Some(w) if w != spec.window => spec.with_window(w).map_err(invalid),
        _ => Ok(spec),
    }
}

fn check_truncation(c: &Common, spec: &MeasureSpec) -> Result<(), Failure> {
    if c.truncation == 0 || c.truncation > spec.window {
        return Err(invalid(format!("truncation {} outside 1..={}", c.truncation, spec.window)));
    }
    Ok(())
}

fn three_rows(spec: &MeasureSpec) -> Result<(), Failure> {
    spec.require_rows(3).map_err(invalid)
}

pub fn check_orthogonality(c: &Common, random: usize) -> Outcome {
    let spec = load_spec(c)?;
    let mut elements = minimal_elements().map_err(invalid)?;
    elements.retain(|e| e.dim() == spec.m);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for _ in 0..random {
        elements.push(random_orthogonal(spec.m, &mut rng).map_err(invalid)?);
    }
    if elements.is_empty() {
        return Err(invalid(format!("no elements for m = {}", spec.m)));
    }
    let entries = orthogonality_sweep(&spec, &elements).map_err(invalid)?;
    Ok(Report::CheckOrthogonality { window: spec.window, entries })
}

pub fn classify(c: &Common) -> Outcome {
    let spec = load_spec(c)?;
    three_rows(&spec)?;
    let classification = classify_case(&spec).map_err(invalid)?;
    Ok(Report::Classify { window: spec.window, classification })
}

fn parse_kind(s: &str) -> Result<KernelKind, Failure> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| {
        let names: Vec<String> = KernelKind::ALL.iter().map(|k| serde_json::to_string(k).unwrap().trim_matches('"').to_string()).collect();
        invalid(format!("unknown kernel kind {s}; expected one of {}", names.join(", ")))
    })
}

pub fn kernels(c: &Common, kind: Option<&str>, row: usize, target: i64, partner: Option<i64>, phase: Option<f64>) -> Outcome {
    let spec = load_spec(c)?;
    three_rows(&spec)?;
    check_truncation(c, &spec)?;
    match kind {
        Some(kind) => {
            let mut ks = KernelSpec::new(parse_kind(kind)?, row, target, c.truncation);
            if let Some(p) = partner {
                ks = ks.with_partner(p);
            }
            if let Some(value) = phase {
                ks = ks.with_phase(Phase::Constant { value });
            }
            match run_kernel(&spec, &ks) {
                Ok(r) => Ok(Report::Kernel { window: spec.window, kernel: KernelSummary::from(&r) }),
                Err(e @ KernelError::Infeasible { .. }) => Err(CliError::Infeasible(e.to_string()).into()),
                Err(e) => Err(invalid(e)),
            }
        }
        None => {
            let classification = classify_case(&spec).map_err(invalid)?;
            let approximation = approximable_triplets(&spec, &classification, c.truncation).map_err(invalid)?;
            Ok(Report::KernelPlan { window: spec.window, approximation })
        }
    }
}

fn delta_of(rows: &[&[f64]]) -> Result<f64, Failure> {
    delta_functional(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).map_err(invalid)
}

fn headline(spec: &MeasureSpec, name: ExampleName, report: &AuditReport) -> Result<Vec<Headline>, Failure> {
    let n = spec.window;
    let cls = &report.classification;
    let approx = &report.approximation;
    let mut out = vec![Headline::text("S pattern", pattern_string(&cls.s_pattern), match name {
        ExampleName::Linear011 => "(0,1,1)",
        _ => "(1,1,1)",
    })];
    match name {
        ExampleName::A1 => {
            // positive indices n = 1..N
            let a: Vec<&[f64]> = (1..=3).map(|r| &spec.a_row(r)[n + 1..]).collect();
            for (label, o) in [("Delta(a1,a2,a3)", [0, 1, 2]), ("Delta(a2,a3,a1)", [1, 2, 0]), ("Delta(a3,a1,a2)", [2, 0, 1])] {
                out.push(Headline::number(label, delta_of(&[a[o[0]], a[o[1]], a[o[2]]])?, 2.0));
            }
        }
        ExampleName::Linear011 => {
            let f2 = xx_family(spec, 2, n).map_err(invalid)?;
            let f3 = xx_family(spec, 3, n).map_err(invalid)?;
            out.push(Headline::number("Delta(Y2^(2),Y3^(2))", delta_of(&[&f2[0], &f2[1]])?, 1.0));
            out.push(Headline::number("Delta(Y3^(3),Y2^(3))", delta_of(&[&f3[0], &f3[2]])?, 1.0));
            out.push(Headline::text("branch", cls.branch_path.get(1).cloned().unwrap_or_default(), "(c)"));
        }
        ExampleName::UnitAlt => {
            out.push(Headline::text("verdict", format!("{:?}", approx.verdict), "ReducibleWitness"));
            if let Some(t) = approx.witness.as_ref().and_then(|w| w.group_element.as_ref()) {
                let s2 = sigma2_series(spec, t).map_err(invalid)?;
                out.push(Headline::number("Sigma2(witness)", s2.total(), 0.0));
            }
        }
        ExampleName::UnitAny => {
            out.push(Headline::text("verdict", format!("{:?}", approx.verdict), "IrreducibleEvidence"));
            let d = ["D1", "D2", "D3"].map(String::from);
            let found = if approx.triplets.contains(&d) { "(D1,D2,D3)" } else { "absent" };
            out.push(Headline::text("triplet", found.into(), "(D1,D2,D3)"));
        }
    }
    Ok(out)
}

pub fn run_example(c: &Common, name: ExampleName) -> Outcome {
    if c.spec.is_some() {
        return Err(invalid("run-example takes the example name, not --spec"));
    }
    let window = c.window.unwrap_or(DEFAULT_WINDOW);
    if window == 0 {
        return Err(invalid("window must be at least 1"));
    }
    let spec = named_example(name.id(), window).map_err(invalid)?;
    check_truncation(c, &spec)?;
    let elements: Vec<GroupElement> = minimal_elements().map_err(invalid)?;
    let report = audit(&spec, c.truncation, &elements).map_err(invalid)?;
    let headline = headline(&spec, name, &report)?;
    Ok(Report::RunExample { example: name.id().into(), headline, audit: report })
}
