//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use gaussrep_decision::{approximable_triplets, classify_case, pattern_string, Verdict};
use gaussrep_group::{is_involution, orthogonal_from_rankone, orthogonality_defect};
use gaussrep_kernels::{duality_cases, gaussian_moment, moment_by_quadrature, run_kernel, xx_family, Moment};
use gaussrep_linalg::{
    delta_functional, generalized_char_poly, hadamard_fischer_gap, hyperplane_distance, min_quadratic_on_hyperplane, DenseMatrix,
    SubsetIndex,
};
use gaussrep_measures::{
    ex_011_11, ex_111_b1_alt, ex_a1, kakutani_product, sigma2_series, Class, MeasureSpec, RowGen, SeqGen, Source,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Vec<Vec<f64>> {
    let q = random_rows(rng, n, n);
    (0..n)
        .map(|i| (0..n).map(|j| dot(&column(&q, i), &column(&q, j)) + if i == j { shift } else { 0.0 }).collect())
        .collect()
}

fn column(m: &[Vec<f64>], j: usize) -> Vec<f64> {
    m.iter().map(|r| r[j]).collect()
}

fn dm(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows).unwrap()
}

/// Gaussian elimination with partial pivoting.
fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..=n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    x
}

/// min (At,t) on (t,b)=1 by conjugate gradients restricted to the constraint plane.
fn projected_cg_qp(a: &[Vec<f64>], b: &[f64]) -> f64 {
    let bb = dot(b, b);
    let project = |v: Vec<f64>| -> Vec<f64> {
        let c = dot(&v, b) / bb;
        v.iter().zip(b).map(|(x, y)| x - c * y).collect()
    };
    let apply = |v: &[f64]| -> Vec<f64> { a.iter().map(|row| dot(row, v)).collect() };
    let mut t: Vec<f64> = b.iter().map(|x| x / bb).collect();
    let mut g = project(apply(&t));
    let mut d: Vec<f64> = g.iter().map(|x| -x).collect();
    for _ in 0..4 * b.len() {
        let gg = dot(&g, &g);
        if gg < 1e-32 {
            break;
        }
        let ad = apply(&d);
        let step = gg / dot(&d, &ad);
        t.iter_mut().zip(&d).for_each(|(x, y)| *x += step * y);
        let g_new = project(apply(&t));
        let beta = dot(&g_new, &g_new) / gg;
        d = g_new.iter().zip(&d).map(|(x, y)| -x + beta * y).collect();
        g = g_new;
    }
    dot(&t, &apply(&t))
}

/// Residual norm of the projection onto span, by modified Gram-Schmidt.
fn lsq_residual(f0: &[f64], span: &[Vec<f64>]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in span {
        let mut w = v.clone();
        for q in &basis {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&w, &w).sqrt();
        basis.push(w.iter().map(|x| x / n).collect());
    }
    let mut r = f0.to_vec();
    for _ in 0..2 {
        for q in &basis {
            let c = dot(&r, q);
            r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
    dot(&r, &r).sqrt()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> SubsetIndex {
    SubsetIndex::new((1..=n).filter(|_| rng.random_bool(0.5)).collect()).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn delta_limit_alternating_means() -> Outcome {
    let start = Instant::now();
    let n = 10_000;
    let spec = ex_a1(n).unwrap();
    // n = 1..N
    let rows: Vec<Vec<f64>> = (1..=3).map(|r| spec.a_row(r)[n + 1..].to_vec()).collect();
    let orders = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
    let values: Vec<f64> = orders
        .iter()
        .map(|o| delta_functional(&o.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()).unwrap())
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = values.iter().all(|v| (v - 2.0).abs() < 0.05) && secs < 10.0;
    check(ok, format!("values {values:?}, {secs:.3} s"))
}

fn two_vector_delta_on_linear_ratio() -> Outcome {
    let n = 10_000;
    let spec = ex_011_11(n).unwrap();
    let f2 = xx_family(&spec, 2, n).unwrap();
    let f3 = xx_family(&spec, 3, n).unwrap();
    let d2 = delta_functional(&[f2[0].clone(), f2[1].clone()]).unwrap();
    let d3 = delta_functional(&[f3[0].clone(), f3[2].clone()]).unwrap();
    let s = pattern_string(&classify_case(&spec).unwrap().s_pattern);
    check((d2 - 1.0).abs() < 0.02 && (d3 - 1.0).abs() < 0.02 && s == "(0,1,1)", format!("deltas {d2:.6}, {d3:.6}; S={s}"))
}

fn hyperplane_minimum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut worst_qp, mut worst_closed) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(1..=50);
        let a = random_spd(&mut rng, n, 0.5);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got = min_quadratic_on_hyperplane(&dm(&a), &b).unwrap().value;
        worst_qp = worst_qp.max(rel(got, projected_cg_qp(&a, &b)));
        worst_closed = worst_closed.max(rel(got, 1.0 / dot(&gauss_solve(&a, &b), &b)));
    }
    check(worst_qp < 1e-8 && worst_closed < 1e-12, format!("max rel vs QP {worst_qp:.2e}, vs closed form {worst_closed:.2e}"))
}

fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    fn walk(p: &mut Vec<usize>, k: usize, m: &[Vec<f64>], sign: f64, total: &mut f64) {
        if k == p.len() {
            *total += sign * (0..p.len()).map(|i| m[i][p[i]]).product::<f64>();
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            walk(p, k + 1, m, if i == k { sign } else { -sign }, total);
            p.swap(k, i);
        }
    }
    let mut p: Vec<usize> = (0..m.len()).collect();
    let mut total = 0.0;
    walk(&mut p, 0, m, 1.0, &mut total);
    total
}

fn characteristic_polynomial() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let c = random_rows(&mut rng, n, n);
        let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut shifted = c.clone();
        for i in 0..n {
            shifted[i][i] += lambda[i];
        }
        let direct = leibniz_det(&shifted);
        let lu = DMatrix::from_fn(n, n, |i, j| shifted[i][j]).determinant();
        let got = generalized_char_poly(&dm(&c), &lambda).unwrap();
        worst = worst.max((got - direct).abs() / direct.abs().max(1.0)).max((got - lu).abs() / lu.abs().max(1.0));
    }
    check(worst < 1e-10, format!("max rel {worst:.2e}"))
}

fn hyperplane_distance_residual() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let dim = rng.random_range(3..=20);
        let k = rng.random_range(1..dim);
        let f0: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let span = random_rows(&mut rng, k, dim);
        let got = hyperplane_distance(&f0, &span).unwrap();
        worst = worst.max(rel(got, lsq_residual(&f0, &span)));
    }
    check(worst < 1e-10, format!("max rel {worst:.2e}"))
}

fn hadamard_fischer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut min_gap = f64::INFINITY;
    let mut identity_gap = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let c = dm(&random_spd(&mut rng, n, 0.1));
        let (a, b) = (random_subset(&mut rng, n), random_subset(&mut rng, n));
        min_gap = min_gap.min(hadamard_fischer_gap(&c, &a, &b).unwrap());
        identity_gap = identity_gap.max(hadamard_fischer_gap(&DenseMatrix::identity(n), &a, &b).unwrap().abs());
    }
    check(min_gap >= -1e-12 && identity_gap <= 1e-12, format!("min gap {min_gap:.3e}, max |gap| at I {identity_gap:.1e}"))
}

fn rank_one_orthogonal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut worst = 0.0f64;
    let mut det2 = 0.0f64;
    for _ in 0..500 {
        let m = rng.random_range(2..=4);
        let c: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let s: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..5.0)).collect();
        let out = orthogonal_from_rankone(&c, &s).unwrap();
        worst = worst.max(orthogonality_defect(out.element.matrix()));
        if m == 2 {
            det2 = det2.max((out.element.det() + 1.0).abs());
        }
    }
    let hand = orthogonal_from_rankone(&[1.0, 1.0, -1.0], &[1.0; 3]).unwrap();
    let exact = hand.lambda == vec![-2.0 / 3.0, -2.0 / 3.0, 2.0 / 3.0];
    check(worst < 1e-12 && exact && det2 < 1e-12, format!("max defect {worst:.2e}, hand λ {:?}, max |det+1| (m=2) {det2:.1e}", hand.lambda))
}

fn gaussian_moments() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..150 {
        let b = 10f64.powf(rng.random_range(-1.0..1.0));
        let a = rng.random_range(-5.0..5.0);
        let s = rng.random_range(-10.0..10.0);
        for m in [
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
        ] {
            let (x, q) = (gaussian_moment(m), moment_by_quadrature(m));
            let err = ((x.re - q.re).abs() / x.re.abs().max(1.0)).max((x.im - q.im).abs() / x.im.abs().max(1.0));
            worst = worst.max(err);
            count += 1;
        }
    }
    check(worst < 1e-8, format!("{count} evaluations, max err {worst:.2e}"))
}

fn kakutani_classes() -> Outcome {
    let n = 10_000;
    let one_row = |b: SeqGen| MeasureSpec::from_generators(n, &[RowGen { b, a: SeqGen::constant(0.0) }]).unwrap();
    let base = one_row(SeqGen::constant(1.0));
    let cases = [
        ("1/n", SeqGen::OnePlusPower { coef: 1.0, alpha: -1.0 }, Class::Convergent),
        ("const", SeqGen::constant(2.0), Class::Divergent),
        ("n^-1/2", SeqGen::OnePlusPower { coef: 1.0, alpha: -0.5 }, Class::Divergent),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, gen, want) in cases {
        let r = kakutani_product(&base, &one_row(gen)).unwrap();
        ok &= r.classification == want && r.source == Source::Heuristic;
        parts.push(format!("{name}: {:?}/{:?}", r.classification, r.source));
    }
    check(ok, parts.join(", "))
}

fn duality_trend() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for case in duality_cases(400, 200).unwrap() {
        let big = run_kernel(&case.spec, &case.kernel).unwrap().residual_min;
        let small = run_kernel(&case.spec, &case.kernel.clone().with_truncation(25)).unwrap().residual_min;
        let ratio = big / small;
        ok &= if case.divergent { ratio < 0.1 } else { ratio > 0.5 };
        parts.push(format!("{:.3}", ratio));
    }
    check(ok, format!("residual ratios M=200/M=25: {}", parts.join(", ")))
}

fn reducibility_witness() -> Outcome {
    let spec = ex_111_b1_alt(1000).unwrap();
    let c = classify_case(&spec).unwrap();
    let v = approximable_triplets(&spec, &c, 200).unwrap();
    let Some(w) = v.witness.as_ref() else {
        return Err(format!("no witness, verdict {:?}", v.verdict));
    };
    let t = w.group_element.as_ref().unwrap();
    let s2 = sigma2_series(&spec, t).unwrap();
    let zero = s2.partial_sums.iter().all(|x| *x == 0.0);
    let defect = orthogonality_defect(t.matrix());
    let ok = v.verdict == Verdict::ReducibleWitness && zero && is_involution(t) && defect < 1e-12;
    check(ok, format!("C={:?}, Σ2 partial sums {:?}, involution {}, defect {defect:.1e}", w.combination, s2.partial_sums, is_involution(t)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("alternating-means delta limit", delta_limit_alternating_means),
        ("two-vector delta on (1,n,n)", two_vector_delta_on_linear_ratio),
        ("hyperplane quadratic minimum", hyperplane_minimum),
        ("generalized characteristic polynomial", characteristic_polynomial),
        ("hyperplane distance", hyperplane_distance_residual),
        ("hadamard-fischer", hadamard_fischer),
        ("rank-one orthogonal construction", rank_one_orthogonal),
        ("gaussian moment closed forms", gaussian_moments),
        ("kakutani classification", kakutani_classes),
        ("kernel/criterion duality", duality_trend),
        ("reducibility witness", reducibility_witness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
