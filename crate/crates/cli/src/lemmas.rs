use clap::ValueEnum;
use gaussrep_group::{orthogonal_cofactor_identity, orthogonal_from_rankone, orthogonality_defect, random_orthogonal};
use gaussrep_kernels::{gaussian_moment, moment_by_quadrature, Moment};
use gaussrep_linalg::{
    delta_functional, delta_functional_ratio, det_i_plus_xtx_expansion, generalized_char_poly, hadamard_fischer_gap,
    hyperplane_distance, min_quadratic_on_hyperplane, DenseMatrix, SubsetIndex,
};
use gaussrep_measures::{hellinger_factor, hellinger_quadrature, GaussianFactor};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{Failure, Outcome, Report};
use crate::{CliError, Common};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    HadamardFischer,
    MinQuadratic,
    CharPoly,
    HyperplaneDistance,
    DetExpansion,
    DeltaRatio,
    RankOne,
    CofactorIdentity,
    GaussianMoments,
    HellingerFactor,
}

impl LemmaId {
    fn default_tol(self) -> f64 {
        match self {
            LemmaId::HadamardFischer | LemmaId::RankOne | LemmaId::CofactorIdentity => 1e-12,
            LemmaId::MinQuadratic | LemmaId::GaussianMoments | LemmaId::HellingerFactor => 1e-8,
            LemmaId::DeltaRatio => 1e-9,
            LemmaId::CharPoly | LemmaId::HyperplaneDistance | LemmaId::DetExpansion => 1e-10,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LemmaReport {
    pub id: LemmaId,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest error over the trials; for hadamard-fischer the most negative gap, negated.
    pub max_error: f64,
    pub worst_trial: Option<usize>,
    pub failures: usize,
    pub passed: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> DMatrix<f64> {
    let q = random_matrix(rng, n, n);
    q.transpose() * &q + DMatrix::identity(n, n) * shift
}

fn dense(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_nalgebra(m.clone()).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> SubsetIndex {
    SubsetIndex::new((1..=n).filter(|_| rng.random_bool(0.5)).collect()).unwrap()
}

/// min (At,t) on (t,b)=1 by conjugate gradients in the constraint plane.
fn projected_cg_qp(a: &DMatrix<f64>, b: &DVector<f64>) -> f64 {
    let bb = b.dot(b);
    let project = |v: DVector<f64>| -> DVector<f64> {
        let c = v.dot(b) / bb;
        v - b * c
    };
    let mut t = b / bb;
    let mut g = project(a * &t);
    let mut d = -g.clone();
    for _ in 0..4 * b.len() {
        let gg = g.dot(&g);
        if gg < 1e-32 {
            break;
        }
        let ad = a * &d;
        t += &d * (gg / d.dot(&ad));
        let g_new = project(a * &t);
        d = -&g_new + d * (g_new.dot(&g_new) / gg);
        g = g_new;
    }
    t.dot(&(a * &t))
}

/// One trial: the error to compare against the tolerance.
fn trial(id: LemmaId, rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let e = |x: gaussrep_linalg::LinalgError| x.to_string();
    Ok(match id {
        LemmaId::HadamardFischer => {
            let n = rng.random_range(2..=6);
            let c = dense(&random_spd(rng, n, 0.1));
            let (a, b) = (random_subset(rng, n), random_subset(rng, n));
            let gap = hadamard_fischer_gap(&c, &a, &b).map_err(e)?;
            let at_identity = hadamard_fischer_gap(&DenseMatrix::identity(n), &a, &b).map_err(e)?.abs();
            (-gap).max(at_identity)
        }
        LemmaId::MinQuadratic => {
            let n = rng.random_range(1..=50);
            let a = random_spd(rng, n, 0.5);
            let b = DVector::from_vec(random_vec(rng, n));
            let got = min_quadratic_on_hyperplane(&dense(&a), b.as_slice()).map_err(e)?.value;
            let closed = 1.0 / a.clone().lu().solve(&b).ok_or("singular system")?.dot(&b);
            rel(got, projected_cg_qp(&a, &b)).max(rel(got, closed))
        }
        LemmaId::CharPoly => {
            let n = rng.random_range(1..=8);
            let c = random_matrix(rng, n, n);
            let lambda = random_vec(rng, n);
            let direct = (&c + DMatrix::from_diagonal(&DVector::from_column_slice(&lambda))).determinant();
            let got = generalized_char_poly(&dense(&c), &lambda).map_err(e)?;
            (got - direct).abs() / direct.abs().max(1.0)
        }
        LemmaId::HyperplaneDistance => {
            let dim = rng.random_range(3..=20);
            let k = rng.random_range(1..dim);
            let f0 = random_vec(rng, dim);
            let span: Vec<Vec<f64>> = (0..k).map(|_| random_vec(rng, dim)).collect();
            let got = hyperplane_distance(&f0, &span).map_err(e)?;
            let a = DMatrix::from_fn(dim, k, |i, j| span[j][i]);
            let y = DVector::from_column_slice(&f0);
            let x = a.clone().svd(true, true).solve(&y, 1e-14)?;
            rel(got, (y - a * x).norm())
        }
        LemmaId::DetExpansion => {
            let (r, n) = (rng.random_range(1..=4), rng.random_range(1..=6));
            let x = random_matrix(rng, r, n);
            let direct = (DMatrix::identity(n, n) + x.transpose() * &x).determinant();
            rel(det_i_plus_xtx_expansion(&dense(&x)).map_err(e)?, direct)
        }
        LemmaId::DeltaRatio => {
            let (k, n) = (rng.random_range(1..=4), rng.random_range(1..=12));
            let fam: Vec<Vec<f64>> = (0..k).map(|_| random_vec(rng, n)).collect();
            let got = delta_functional(&fam).map_err(e)?;
            (got - delta_functional_ratio(&fam).map_err(e)?).abs() / got.abs().max(1.0)
        }
        LemmaId::RankOne => {
            let m = rng.random_range(2..=4);
            let c: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
            let s: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..5.0)).collect();
            let out = orthogonal_from_rankone(&c, &s).map_err(|x| x.to_string())?;
            let mut err = orthogonality_defect(out.element.matrix());
            for k in 0..m {
                for r in 0..m {
                    let lhs = s[k] * out.element.get(k, r) / s[r] - if k == r { 1.0 } else { 0.0 };
                    err = err.max((lhs - out.lambda[k] * c[r]).abs());
                }
            }
            err
        }
        LemmaId::CofactorIdentity => {
            let t = random_orthogonal(rng.random_range(2..=4), rng).map_err(|x| x.to_string())?;
            orthogonal_cofactor_identity(t.matrix()).map_err(|x| x.to_string())?
        }
        LemmaId::GaussianMoments => {
            let b = 10f64.powf(rng.random_range(-1.0..1.0));
            let a = rng.random_range(-5.0..5.0);
            let s = rng.random_range(-10.0..10.0);
            let moments = [
                Moment::CharFn { b, s },
                Moment::FirstMoment { a, b, s },
                Moment::SinMean { a, b, s },
                Moment::CosMean { a, b, s },
                Moment::SinI3 { b, s },
                Moment::CosI3 { b, s },
                Moment::ShiftSquare { a, b },
                Moment::SquareVariance { a, b },
                Moment::ExpVariance { a, b, s },
                Moment::SinVariance { a, b, s },
                Moment::CosVariance { a, b, s },
            ];
            moments
                .into_iter()
                .map(|m| {
                    let (x, q) = (gaussian_moment(m), moment_by_quadrature(m));
                    ((x.re - q.re).abs() / x.re.abs().max(1.0)).max((x.im - q.im).abs() / x.im.abs().max(1.0))
                })
                .fold(0.0, f64::max)
        }
        LemmaId::HellingerFactor => {
            let p = GaussianFactor { b: rng.random_range(0.1..10.0), a: rng.random_range(-5.0..5.0) };
            let q = GaussianFactor { b: rng.random_range(0.1..10.0), a: rng.random_range(-5.0..5.0) };
            [true, false]
                .into_iter()
                .map(|c| (hellinger_factor(p, q, c) - hellinger_quadrature(p, q, c)).abs())
                .fold(0.0, f64::max)
        }
    })
}

pub fn verify(c: &Common, id: LemmaId, trials: usize) -> Outcome {
    if trials == 0 {
        return Err(CliError::Invalid("trials must be at least 1".into()).into());
    }
    let tolerance = c.tol.unwrap_or(id.default_tol());
    if !(tolerance >= 0.0) {
        return Err(CliError::Invalid(format!("tolerance {tolerance} must be nonnegative")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut max_error = f64::NEG_INFINITY;
    let mut worst_trial = None;
    let mut failures = 0;
    for i in 0..trials {
        let err = trial(id, &mut rng).map_err(|m| Failure::from(CliError::Invalid(m)))?;
        if !(err <= tolerance) {
            failures += 1;
        }
        if err > max_error || err.is_nan() {
            max_error = err;
            worst_trial = Some(i);
        }
    }
    let report = LemmaReport { id, trials, seed: c.seed, tolerance, max_error, worst_trial, failures, passed: failures == 0 };
    if report.passed {
        Ok(Report::VerifyLemma(report))
    } else {
        let msg = format!("{failures} of {trials} trials above tolerance {tolerance:e}");
        Err(Failure { report: Some(Report::VerifyLemma(report)), error: CliError::LemmaFailed(msg) })
    }
}
