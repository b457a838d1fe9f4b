use gaussrep_kernels::{d_family, xx_family};
use gaussrep_measures::{s_r_series, sigma_ij_scale, Class, MeasureSpec, SeriesReport};
use serde::{Deserialize, Serialize};

use crate::criteria::{family_report, window_report};
use crate::pattern::{pattern_string, tail_limit, Bit, Limit, LimitReport, Triple};
use crate::probe::{default_grid, l2_combination_probe, ProbeReport};
use crate::{DecisionError, Result};

/// Relative tolerance on s⁴/L for a scale to count as matching the ratio limit L.
const SCALE_MATCH: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    /// Log-spaced scales in [scale_min, scale_max] for Σ_ij(s).
    pub scale_points: usize,
    pub scale_min: f64,
    pub scale_max: f64,
    pub probe_grid: Vec<f64>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { scale_points: 41, scale_min: 1e-2, scale_max: 1e2, probe_grid: default_grid() }
    }
}

impl ClassifyConfig {
    pub fn scale_grid(&self) -> Vec<f64> {
        let k = self.scale_points.max(2);
        let (lo, hi) = (self.scale_min.ln(), self.scale_max.ln());
        (0..k).map(|j| (lo + (hi - lo) * j as f64 / (k - 1) as f64).exp()).collect()
    }
}

/// Σ_ij(s) minimised over the scale grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleScan {
    pub pair: (usize, usize),
    /// Scale of the reported series.
    pub scale: f64,
    /// s with s⁴ = lim b_j/b_i when that limit is finite and positive.
    pub optimal_scale: Option<f64>,
    /// Set when the scale was composed from the other two pairs.
    pub composed: bool,
    pub report: SeriesReport,
    pub bit: Bit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YPattern {
    /// ‖Y_r‖² with Y_r = a_r/(Σ_s 1/2b_s)^{1/2}
    pub y123: Triple,
    pub y123_reports: Vec<SeriesReport>,
    /// Row r holds ‖Y_s^{(r)}‖², s = 1..3.
    pub matrix: [Triple; 3],
    pub matrix_reports: Vec<SeriesReport>,
    /// Δ^{(k)}: Δ of (Y_k^{(k)}, Y_i^{(k)}, Y_j^{(k)})
    pub delta_x: Triple,
    /// Δ_k: Δ of (Y_k, Y_i, Y_j)
    pub delta_d: Triple,
    pub delta_reports: Vec<SeriesReport>,
    /// Σ_n (Σb²)/(Σb)², the lower bound for any y_1^{(i_1)} + y_2^{(i_2)} + y_3^{(i_3)}.
    pub bound: SeriesReport,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchStep {
    pub label: String,
    pub test: String,
    pub outcome: String,
    pub reports: Vec<SeriesReport>,
    pub limits: Vec<LimitReport>,
    pub probe: Option<ProbeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseClassification {
    /// (S_1(3), S_2(3), S_3(3)) in the given row order.
    pub s_pattern: Triple,
    pub s_reports: Vec<SeriesReport>,
    /// Set when the pattern came back all-convergent and the largest entry was
    /// forced divergent by S_1 + S_2 + S_3 ≥ Σ_n 1.
    pub s_forced: bool,
    /// Canonical row r is given row row_order[r-1]; the remaining fields use canonical rows.
    pub row_order: [usize; 3],
    /// (Σ_12(s), Σ_23(s), Σ_13(s))
    pub sigma123_pattern: Triple,
    pub sigma_scans: Vec<ScaleScan>,
    pub y_pattern: YPattern,
    pub branch_path: Vec<String>,
    pub steps: Vec<BranchStep>,
    /// An inconclusive test stopped the walk.
    pub truncated: bool,
}

impl CaseClassification {
    pub fn label(&self) -> String {
        self.branch_path.join(" → ")
    }
}

pub fn classify_case(spec: &MeasureSpec) -> Result<CaseClassification> {
    classify_case_with(spec, &ClassifyConfig::default())
}

fn permuted(spec: &MeasureSpec, order: [usize; 3]) -> Result<MeasureSpec> {
    let b = order.iter().map(|&r| spec.b_row(r).to_vec()).collect();
    let a = order.iter().map(|&r| spec.a_row(r).to_vec()).collect();
    Ok(MeasureSpec::new(b, a)?.with_tag_map(spec.tags.clone()).normalize_row_one()?)
}

/// Canonical order: (0,0,1) puts the divergent row last, (0,1,1) the convergent row first.
fn canonical_order(bits: &Triple) -> [usize; 3] {
    let ones: Vec<usize> = (1..=3).filter(|&r| bits[r - 1] == Bit::One).collect();
    let zeros: Vec<usize> = (1..=3).filter(|&r| bits[r - 1] != Bit::One).collect();
    match ones.len() {
        1 => [zeros[0], zeros[1], ones[0]],
        2 => [zeros[0], ones[0], ones[1]],
        _ => [1, 2, 3],
    }
}

pub fn classify_case_with(spec: &MeasureSpec, cfg: &ClassifyConfig) -> Result<CaseClassification> {
    spec.require_rows(3)?;
    if spec.m != 3 {
        return Err(DecisionError::Invalid(format!("classification needs m = 3, got {}", spec.m)));
    }
    let base = spec.normalize_row_one()?;
    let mut s_reports = (1..=3).map(|r| s_r_series(&base, r)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut s_pattern: Triple = [0, 1, 2].map(|i| Bit::of(s_reports[i].classification));
    let mut s_forced = false;
    if s_pattern.iter().all(|b| *b == Bit::Zero) {
        let big = (0..3).max_by(|&i, &j| s_reports[i].total().total_cmp(&s_reports[j].total())).unwrap_or(0);
        s_reports[big] = s_reports[big].clone().analytic(Class::Divergent);
        s_pattern[big] = Bit::One;
        s_forced = true;
    }
    let complete = !s_pattern.contains(&Bit::Unknown);
    let row_order = if complete { canonical_order(&s_pattern) } else { [1, 2, 3] };
    let canon = permuted(&base, row_order)?;

    let sigma_scans = scale_scans(&canon, cfg)?;
    let sigma123_pattern: Triple = [0, 1, 2].map(|i| sigma_scans[i].bit);
    let y_pattern = y_pattern(&canon)?;

    let mut w = Walker::default();
    let canon_bits: Triple = [0, 1, 2].map(|i| s_pattern[row_order[i] - 1]);
    w.push(
        &format!("S={}", pattern_string(&canon_bits)),
        "S_r(3)",
        &format!("given rows {}, canonical order {:?}", pattern_string(&s_pattern), row_order),
        s_reports.clone(),
    );
    if !complete {
        w.stop("S_r(3)");
    } else {
        let ones = canon_bits.iter().filter(|b| **b == Bit::One).count();
        let ctx = Ctx { spec: &canon, cfg, y: &y_pattern, scans: &sigma_scans };
        match ones {
            1 => walk_001(&ctx, &mut w)?,
            2 => walk_011(&ctx, &mut w)?,
            _ => walk_111(&ctx, &mut w)?,
        }
    }

    Ok(CaseClassification {
        s_pattern,
        s_reports,
        s_forced,
        row_order,
        sigma123_pattern,
        sigma_scans,
        y_pattern,
        branch_path: w.path,
        steps: w.steps,
        truncated: w.truncated,
    })
}

struct Ctx<'a> {
    spec: &'a MeasureSpec,
    cfg: &'a ClassifyConfig,
    y: &'a YPattern,
    scans: &'a [ScaleScan],
}

#[derive(Default)]
struct Walker {
    path: Vec<String>,
    steps: Vec<BranchStep>,
    truncated: bool,
}

impl Walker {
    fn push(&mut self, label: &str, test: &str, outcome: &str, reports: Vec<SeriesReport>) -> &mut BranchStep {
        self.path.push(label.to_string());
        self.steps.push(BranchStep {
            label: label.to_string(),
            test: test.to_string(),
            outcome: outcome.to_string(),
            reports,
            limits: Vec::new(),
            probe: None,
        });
        self.steps.last_mut().expect("just pushed")
    }

    fn stop(&mut self, test: &str) {
        self.path.push(format!("inconclusive({test})"));
        self.truncated = true;
    }
}

fn ratio_report(spec: &MeasureSpec, i: usize, j: usize) -> SeriesReport {
    window_report(spec, &format!("Sigma^{i}{j}"), |p| spec.b_at(i, p) / spec.b_at(j, p))
}

fn ratio_limit(spec: &MeasureSpec, i: usize, j: usize) -> LimitReport {
    tail_limit(spec, &format!("b{i}/b{j}"), |p| spec.b_at(i, p) / spec.b_at(j, p))
}

/// Σ c_n² with b_i/b_j = d(1 + c_n).
fn residue_report(spec: &MeasureSpec, i: usize, j: usize, d: f64) -> SeriesReport {
    window_report(spec, &format!("c^2[b{i}/b{j}]"), |p| (spec.b_at(i, p) / (spec.b_at(j, p) * d) - 1.0).powi(2))
}

fn scan_pair(spec: &MeasureSpec, cfg: &ClassifyConfig, i: usize, j: usize) -> Result<ScaleScan> {
    let limit = ratio_limit(spec, j, i);
    let optimal_scale = match limit.limit {
        Limit::Positive { value } => Some(value.powf(0.25)),
        _ => None,
    };
    let mut scales = cfg.scale_grid();
    scales.extend(optimal_scale);
    let reports: Vec<(f64, SeriesReport)> = gaussrep_linalg::par::map_slice(&scales, |&s| {
        sigma_ij_scale(spec, i, j, s).map(|r| (s, r.report))
    })
    .into_iter()
    .collect::<std::result::Result<_, _>>()?;
    let reports = reports.into_iter().map(|(s, r)| (s, off_limit(s, optimal_scale, r))).collect();
    Ok(pick_scale((i, j), optimal_scale, reports))
}

/// Terms of Σ_ij(s) tend to (s²L^{-1/2} − s⁻²L^{1/2})², so away from s⁴ = L (or with no
/// finite positive L) they stay bounded below and the series diverges whatever the
/// partial sums suggest at window scale.
fn off_limit(s: f64, optimal: Option<f64>, mut report: SeriesReport) -> SeriesReport {
    let near = optimal.is_some_and(|o| ((s / o).powi(4) - 1.0).abs() <= SCALE_MATCH);
    if !near {
        report.classification = Class::Divergent;
    }
    report
}

fn pick_scale(pair: (usize, usize), optimal_scale: Option<f64>, reports: Vec<(f64, SeriesReport)>) -> ScaleScan {
    let by_total = |a: &&(f64, SeriesReport), b: &&(f64, SeriesReport)| a.1.total().total_cmp(&b.1.total());
    let best = reports
        .iter()
        .filter(|(_, r)| r.classification == Class::Convergent)
        .min_by(by_total)
        .or_else(|| reports.iter().filter(|(_, r)| r.classification == Class::Inconclusive).min_by(by_total))
        .or_else(|| reports.iter().min_by(by_total))
        .cloned()
        .expect("non-empty scale grid");
    ScaleScan { pair, scale: best.0, optimal_scale, composed: false, bit: Bit::of(best.1.classification), report: best.1 }
}

/// Σ_12, Σ_23, Σ_13 over the scale grid. Two convergent pairs force the third to be
/// tested at the composed scale, since equivalence of the scaled measures is transitive.
fn scale_scans(spec: &MeasureSpec, cfg: &ClassifyConfig) -> Result<Vec<ScaleScan>> {
    let pairs = [(1, 2), (2, 3), (1, 3)];
    let mut scans = pairs.iter().map(|&(i, j)| scan_pair(spec, cfg, i, j)).collect::<Result<Vec<_>>>()?;
    let bits: Vec<Bit> = scans.iter().map(|s| s.bit).collect();
    if bits.iter().filter(|b| **b == Bit::Zero).count() == 2 && bits.contains(&Bit::One) {
        let odd = bits.iter().position(|b| *b == Bit::One).expect("one divergent pair");
        let (s12, s23, s13) = (scans[0].scale, scans[1].scale, scans[2].scale);
        let s = match odd {
            0 => s13 / s23,
            1 => s13 / s12,
            _ => s12 * s23,
        };
        let (i, j) = pairs[odd];
        let report = off_limit(s, scans[odd].optimal_scale, sigma_ij_scale(spec, i, j, s)?.report);
        let scan = &mut scans[odd];
        scan.composed = true;
        scan.scale = s;
        // still divergent at the composed scale: the two convergent calls cannot both be right
        scan.bit = if report.classification == Class::Convergent { Bit::Zero } else { Bit::Unknown };
        scan.report = report;
    }
    Ok(scans)
}

fn y_pattern(spec: &MeasureSpec) -> Result<YPattern> {
    let n = spec.window;
    let inv = |p: usize| (1..=3).map(|s| 0.5 / spec.b_at(s, p)).sum::<f64>();
    let y123_reports: Vec<SeriesReport> =
        (1..=3).map(|r| window_report(spec, &format!("y_{r}"), |p| spec.a_at(r, p).powi(2) / inv(p))).collect();
    let lambda = |r: usize, p: usize| {
        let sum: f64 = (1..=3).map(|s| spec.b_at(s, p)).sum();
        let sq: f64 = (1..=3).filter(|&s| s != r).map(|s| spec.b_at(s, p).powi(2)).sum();
        sum * sum - sq
    };
    let mut matrix_reports = Vec::new();
    for r in 1..=3 {
        for s in 1..=3 {
            matrix_reports.push(window_report(spec, &format!("y_{s}^({r})"), |p| spec.b_at(s, p).powi(2) / lambda(r, p)));
        }
    }
    let mut delta_reports = Vec::new();
    for r in 1..=3 {
        delta_reports.push(family_report(&format!("Delta^({r})"), &xx_family(spec, r, n)?)?.with_tags(&spec.tags));
    }
    for r in 1..=3 {
        delta_reports.push(family_report(&format!("Delta_{r}"), &d_family(spec, r, n)?)?.with_tags(&spec.tags));
    }
    let bound = window_report(spec, "y_bound", |p| {
        let sum: f64 = (1..=3).map(|s| spec.b_at(s, p)).sum();
        (1..=3).map(|s| spec.b_at(s, p).powi(2)).sum::<f64>() / (sum * sum)
    });
    let bound_holds = (0..bound.partial_sums.len()).all(|q| {
        let low: f64 = (0..3)
            .map(|s| (0..3).map(|r| matrix_reports[3 * r + s].partial_sums[q]).fold(f64::INFINITY, f64::min))
            .sum();
        low >= bound.partial_sums[q] * (1.0 - 1e-12)
    });
    let bit = |r: &SeriesReport| Bit::of(r.classification);
    Ok(YPattern {
        y123: [0, 1, 2].map(|i| bit(&y123_reports[i])),
        matrix: [0, 1, 2].map(|r| [0, 1, 2].map(|s| bit(&matrix_reports[3 * r + s]))),
        delta_x: [0, 1, 2].map(|i| bit(&delta_reports[i])),
        delta_d: [3, 4, 5].map(|i| bit(&delta_reports[i])),
        y123_reports,
        matrix_reports,
        delta_reports,
        bound,
        bound_holds,
    })
}

/// √b_1·a_r, r ∈ rows.
fn mean_vectors(spec: &MeasureSpec, rows: &[usize]) -> Vec<Vec<f64>> {
    rows.iter().map(|&r| (0..spec.len()).map(|p| spec.b_at(1, p).sqrt() * spec.a_at(r, p)).collect()).collect()
}

/// ν probe: `.0` when some combination of the means is square-summable, `.1` when
/// even the least-norm combination diverges.
fn nu_step(ctx: &Ctx, w: &mut Walker, rows: &[usize], prefix: &str, labels: (&str, &str)) -> Result<()> {
    let probe = l2_combination_probe(&mean_vectors(ctx.spec, rows), &ctx.cfg.probe_grid)?;
    let test = format!("nu{rows:?}");
    let (label, outcome) = if let Some(c) = &probe.bounded {
        (labels.0, format!("bounded combination {:?}", c.coefficients))
    } else if probe.least_squares.norms.classification == Class::Divergent {
        (labels.1, "every tested combination diverges".to_string())
    } else {
        w.stop(&test);
        w.steps.push(BranchStep {
            label: format!("{prefix}?"),
            test,
            outcome: "least-norm combination inconclusive".into(),
            reports: vec![probe.least_squares.norms.clone()],
            limits: Vec::new(),
            probe: Some(probe),
        });
        return Ok(());
    };
    let reports = vec![probe.least_squares.norms.clone()];
    w.push(&format!("{prefix}{label}"), &test, &outcome, reports).probe = Some(probe);
    Ok(())
}

/// y_23 = (y_2, y_3) → (p.0)…(p.3), then the ν probe for p.1–p.3.
fn y_nu_steps(ctx: &Ctx, w: &mut Walker, prefix: &str) -> Result<()> {
    let (y2, y3) = (ctx.y.y123[1], ctx.y.y123[2]);
    let reports = vec![ctx.y.y123_reports[1].clone(), ctx.y.y123_reports[2].clone()];
    let (Some(v2), Some(v3)) = (y2.value(), y3.value()) else {
        w.stop("y_23");
        return Ok(());
    };
    let k = v2 + 2 * v3;
    let label = format!("({prefix}.{k})");
    w.push(&label, "y_23", &pattern_string(&[y2, y3]), reports);
    let rows: &[usize] = match k {
        0 => return Ok(()),
        1 => &[1, 2],
        2 => &[1, 3],
        _ => &[1, 2, 3],
    };
    nu_step(ctx, w, rows, &format!("({prefix}.{k}"), (".0)", ".1)"))
}

fn walk_001(ctx: &Ctx, w: &mut Walker) -> Result<()> {
    let spec = ctx.spec;
    let s12 = ratio_report(spec, 1, 2);
    match Bit::of(s12.classification) {
        Bit::Zero => {
            w.push("(1)", "Sigma^12", "convergent", vec![s12]);
            return Ok(());
        }
        Bit::Unknown => {
            w.steps.push(step("?", "Sigma^12", "inconclusive", vec![s12]));
            w.stop("Sigma^12");
            return Ok(());
        }
        Bit::One => {
            w.push("(2)", "Sigma^12", "divergent", vec![s12]);
        }
    }
    let lim = ratio_limit(spec, 1, 2);
    let label = match lim.limit {
        Limit::Zero => "(a)",
        Limit::Positive { .. } => "(b)",
        Limit::Infinite => "(c)",
        Limit::Oscillating => {
            w.stop("lim b1/b2");
            w.steps.push(with_limit(step("?", "lim b1/b2", "no limit", vec![]), lim));
            return Ok(());
        }
    };
    let outcome = format!("{:?}", lim.limit);
    w.push(label, "lim b1/b2", &outcome, vec![]).limits.push(lim);
    y_nu_steps(ctx, w, "1")
}

fn walk_011(ctx: &Ctx, w: &mut Walker) -> Result<()> {
    let spec = ctx.spec;
    let lim = ratio_limit(spec, 3, 2);
    let outcome = format!("{:?}", lim.limit);
    let label = match lim.limit {
        Limit::Infinite => "(a)",
        Limit::Zero => "(d)",
        Limit::Positive { value } => {
            let c2 = residue_report(spec, 3, 2, value);
            match Bit::of(c2.classification) {
                Bit::One => {
                    w.push("(b)", "d_n = b3/b2", &format!("{outcome}, sum c^2 divergent"), vec![c2]).limits.push(lim);
                    return y_nu_steps(ctx, w, "1");
                }
                Bit::Zero => {
                    w.push("(c)", "d_n = b3/b2", &format!("{outcome}, sum c^2 convergent"), vec![c2]).limits.push(lim);
                    return walk_011_c(ctx, w);
                }
                Bit::Unknown => {
                    w.steps.push(with_limit(step("?", "d_n = b3/b2", "sum c^2 inconclusive", vec![c2]), lim));
                    w.stop("sum c^2");
                    return Ok(());
                }
            }
        }
        Limit::Oscillating => {
            w.steps.push(with_limit(step("?", "d_n = b3/b2", "no limit", vec![]), lim));
            w.stop("d_n");
            return Ok(());
        }
    };
    w.push(label, "d_n = b3/b2", &outcome, vec![]).limits.push(lim);
    y_nu_steps(ctx, w, "1")
}

fn walk_011_c(ctx: &Ctx, w: &mut Walker) -> Result<()> {
    let spec = ctx.spec;
    let s12 = ratio_report(spec, 1, 2);
    let s13 = ratio_report(spec, 1, 3);
    let bits = [Bit::of(s12.classification), Bit::of(s13.classification)];
    let (Some(p), Some(q)) = (bits[0].value(), bits[1].value()) else {
        w.steps.push(step("?", "(Sigma^12, Sigma^13)", &pattern_string(&bits), vec![s12, s13]));
        w.stop("(Sigma^12, Sigma^13)");
        return Ok(());
    };
    let k = 1 + 2 * p + q;
    w.push(&format!("(2.{k})"), "(Sigma^12, Sigma^13)", &pattern_string(&bits), vec![s12, s13]);
    if k != 4 {
        return Ok(());
    }
    let (y2, y3) = (ctx.y.y123[1], ctx.y.y123[2]);
    let (Some(v2), Some(v3)) = (y2.value(), y3.value()) else {
        w.stop("y_23");
        return Ok(());
    };
    let j = 1 + v2 + 2 * v3;
    let reports = vec![ctx.y.y123_reports[1].clone(), ctx.y.y123_reports[2].clone()];
    w.push(&format!("(2.4.{j})"), "y_23", &pattern_string(&[y2, y3]), reports);
    if j != 4 {
        return Ok(());
    }
    let (a, b) = (&ctx.scans[0], &ctx.scans[2]);
    let reports = vec![a.report.clone(), b.report.clone()];
    let pat = pattern_string(&[a.bit, b.bit]);
    if a.bit == Bit::Zero || b.bit == Bit::Zero {
        w.push("(2.4.4.1)", "Sigma_12(s), Sigma_13(s)", &pat, reports);
    } else if a.bit == Bit::One && b.bit == Bit::One {
        w.push("(2.4.4.2)", "Sigma_12(s), Sigma_13(s)", &pat, reports);
    } else {
        w.steps.push(step("?", "Sigma_12(s), Sigma_13(s)", &pat, reports));
        w.stop("Sigma_12(s), Sigma_13(s)");
    }
    Ok(())
}

/// Limit letter of l = lim b_s/b_r: (a) ∞, (b) finite positive with Σc² = ∞, (c) 0, (d) none.
fn l_letter(spec: &MeasureSpec, s: usize, r: usize) -> (Option<char>, LimitReport, Option<SeriesReport>) {
    let lim = ratio_limit(spec, s, r);
    match lim.limit {
        Limit::Infinite => (Some('a'), lim, None),
        Limit::Zero => (Some('c'), lim, None),
        Limit::Oscillating => (Some('d'), lim, None),
        Limit::Positive { value } => {
            let c2 = residue_report(spec, s, r, value);
            let letter = (c2.classification == Class::Divergent).then_some('b');
            (letter, lim, Some(c2))
        }
    }
}

fn walk_111(ctx: &Ctx, w: &mut Walker) -> Result<()> {
    let bits: Triple = [0, 1, 2].map(|i| ctx.scans[i].bit);
    let reports: Vec<SeriesReport> = ctx.scans.iter().map(|s| s.report.clone()).collect();
    let pat = pattern_string(&bits);
    let (Some(x), Some(y), Some(z)) = (bits[0].value(), bits[1].value(), bits[2].value()) else {
        w.steps.push(step("?", "Sigma123(s)", &pat, reports));
        w.stop("Sigma123(s)");
        return Ok(());
    };
    let k = 4 * x + 2 * y + z;
    w.push(&format!("Sigma123={pat} ({k})"), "Sigma123(s)", &pat, reports);
    match k {
        0 => nu_step(ctx, w, &[1, 2, 3], "", ("nu bounded", "nu divergent")),
        3 | 5 | 6 => {
            // the convergent pair fixes two comparable rows; the third is the outlier
            let (outlier, base) = match k {
                3 => (3, 1),
                5 => (1, 2),
                _ => (2, 1),
            };
            let (letter, lim, c2) = l_letter(ctx.spec, outlier, base);
            let test = format!("lim b{outlier}/b{base}");
            let outcome = format!("{:?}", lim.limit);
            let reports: Vec<SeriesReport> = c2.into_iter().collect();
            match letter {
                Some(l @ ('a' | 'b' | 'c')) => {
                    let label = if k == 3 { format!("({l})") } else { format!("({k})~(3) ({l})") };
                    w.push(&label, &test, &outcome, reports).limits.push(lim);
                }
                _ => {
                    w.steps.push(with_limit(step("?", &test, &outcome, reports), lim));
                    w.stop(&test);
                }
            }
            Ok(())
        }
        7 => {
            let pairs = [(2, 1), (3, 2), (3, 1)];
            let mut letters = Vec::new();
            let mut limits = Vec::new();
            let mut reports = Vec::new();
            for &(s, r) in &pairs {
                let (l, lim, c2) = l_letter(ctx.spec, s, r);
                letters.push(l);
                limits.push(lim);
                reports.extend(c2);
            }
            let shown: String = letters.iter().map(|l| l.unwrap_or('?')).collect();
            let test = "l_21, l_32, l_31";
            if letters.contains(&None) {
                let mut st = step("?", test, &shown, reports);
                st.limits = limits;
                w.steps.push(st);
                w.stop(test);
                return Ok(());
            }
            let sub = match shown.as_str() {
                "bbb" => Some("(1)"),
                "aaa" => Some("(2)"),
                "aba" => Some("(3)"),
                "bab" => Some("(4)"),
                _ => None,
            };
            let label = match sub {
                Some(s) => format!("l=({shown}) {s}"),
                None => format!("l=({shown})"),
            };
            w.push(&label, test, &shown, reports).limits = limits;
            Ok(())
        }
        _ => {
            w.stop("forbidden Sigma123 pattern");
            Ok(())
        }
    }
}

fn step(label: &str, test: &str, outcome: &str, reports: Vec<SeriesReport>) -> BranchStep {
    BranchStep {
        label: label.to_string(),
        test: test.to_string(),
        outcome: outcome.to_string(),
        reports,
        limits: Vec::new(),
        probe: None,
    }
}

fn with_limit(mut st: BranchStep, lim: LimitReport) -> BranchStep {
    st.limits.push(lim);
    st
}
