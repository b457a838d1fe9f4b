use gaussrep_group::{elementary, generic, orthogonal_from_rankone, random_orthogonal, tau_r, GroupElement};
use gaussrep_linalg::DenseMatrix;
use gaussrep_measures::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}

fn constant_rows(window: usize, b: [f64; 3], a: [f64; 3]) -> MeasureSpec {
    let rows: Vec<RowGen> = (0..3).map(|r| RowGen { b: SeqGen::constant(b[r]), a: SeqGen::constant(a[r]) }).collect();
    MeasureSpec::from_generators(window, &rows).unwrap()
}

fn random_spec(rng: &mut ChaCha8Rng, m: usize, window: usize) -> MeasureSpec {
    let len = 2 * window + 1;
    let b = (0..m).map(|_| (0..len).map(|_| rng.random_range(0.2..5.0)).collect()).collect();
    let a = (0..m).map(|_| (0..len).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
    MeasureSpec::new(b, a).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, m: usize) -> GroupElement {
    loop {
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        if let Ok(g) = generic(DenseMatrix::from_rows(&rows).unwrap()) {
            if g.det().abs() > 0.05 {
                return g;
            }
        }
    }
}

/// Cofactor matrix of a 3×3 matrix written out entry by entry.
fn cof3(x: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let m = x[r[0]][c[0]] * x[r[1]][c[1]] - x[r[0]][c[1]] * x[r[1]][c[0]];
            out[i][j] = if (i + j) % 2 == 0 { m } else { -m };
        }
    }
    out
}

#[test]
fn hellinger_factor_values() {
    let one = GaussianFactor { b: 1.0, a: 0.0 };
    assert_eq!(hellinger_factor(one, one, true), 1.0);
    let three = GaussianFactor { b: 3.0, a: 0.0 };
    let h = hellinger_factor(one, three, true);
    assert!((h - 0.75f64.powf(0.25)).abs() < 1e-15);
    assert!((h - 0.930605).abs() < 1e-6);
}

#[test]
fn hellinger_factor_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = GaussianFactor { b: rng.random_range(0.1..10.0), a: rng.random_range(-5.0..5.0) };
        let q = GaussianFactor { b: rng.random_range(0.1..10.0), a: rng.random_range(-5.0..5.0) };
        for centered in [true, false] {
            let exact = hellinger_factor(p, q, centered);
            let quad = hellinger_quadrature(p, q, centered);
            assert!((exact - quad).abs() < 1e-8, "{p:?} {q:?} {exact} {quad}");
            assert!(exact > 0.0 && exact <= 1.0);
        }
    }
}

#[test]
fn hellinger_block_identity_is_one() {
    let spec = ex_011_11(50).unwrap();
    let id = elementary(3, 1, 2, 0.0).unwrap();
    for n in -50..=50 {
        assert!((hellinger_block(&spec, &id, n).unwrap() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn hellinger_block_matches_expansion_and_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for m in [2usize, 3] {
        for _ in 0..50 {
            let spec = random_spec(&mut rng, m, 3);
            let t = random_element(&mut rng, m);
            for n in -3..=3 {
                let h = hellinger_block(&spec, &t, n).unwrap();
                assert!(h <= 1.0 + 1e-12);
                assert!(rel(h, hellinger_block_expansion(&spec, &t, n).unwrap()) < 1e-10);
                let lhs = 2f64.powi(m as i32) * t.det().abs() * (h.powi(-2) - 1.0);
                let rhs = hellinger_bracket(&spec, &t, n).unwrap();
                assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "m={m} {lhs} {rhs}");
            }
        }
    }
}

#[test]
fn two_row_bracket_explicit_form() {
    // det > 0: (1−d)² + (t11 − t22)² + (t12√(b1/b2) + t21√(b2/b1))²
    let spec = MeasureSpec::new(vec![vec![2.0; 3], vec![0.5; 3]], vec![vec![0.0; 3]; 2]).unwrap();
    let t = generic(DenseMatrix::from_rows(&[vec![1.2, 0.3], vec![-0.4, 0.9]]).unwrap()).unwrap();
    let d = t.det();
    let q = 2.0f64;
    let expected = (1.0 - d).powi(2) + (1.2f64 - 0.9).powi(2) + (0.3 * q - 0.4 / q).powi(2);
    assert!((hellinger_bracket(&spec, &t, 0).unwrap() - expected).abs() < 1e-13);
}

#[test]
fn kakutani_identity_and_swap() {
    let spec = ex_a1(200).unwrap();
    let id = elementary(3, 2, 3, 0.0).unwrap();
    let r = kakutani_orthogonality(&spec, &id).unwrap();
    assert_eq!(r.combined.total(), 0.0);
    assert_eq!(r.combined.classification, Class::Convergent);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = random_spec(&mut rng, 3, 20);
    let t = random_element(&mut rng, 3);
    let tinv = t.inverse().unwrap();
    for n in -20..=20 {
        let a = hellinger_block(&spec, &t, n).unwrap();
        let b = hellinger_block(&spec, &tinv, n).unwrap();
        assert!(rel(a, b) < 1e-10);
    }
    let p = random_spec(&mut rng, 2, 30);
    let q = random_spec(&mut rng, 2, 30);
    assert_eq!(kakutani_product(&p, &q).unwrap().partial_sums, kakutani_product(&q, &p).unwrap().partial_sums);
}

fn one_row(window: usize, b: SeqGen) -> MeasureSpec {
    MeasureSpec::from_generators(window, &[RowGen { b, a: SeqGen::constant(0.0) }]).unwrap()
}

#[test]
fn kakutani_product_families() {
    let n = 10_000;
    let base = one_row(n, SeqGen::constant(1.0));
    let cases = [
        (SeqGen::OnePlusPower { coef: 1.0, alpha: -1.0 }, Class::Convergent),
        (SeqGen::constant(2.0), Class::Divergent),
        (SeqGen::OnePlusPower { coef: 1.0, alpha: -0.5 }, Class::Divergent),
    ];
    for (gen, want) in cases {
        let other = one_row(n, gen.clone());
        let r = kakutani_product(&base, &other).unwrap();
        assert_eq!(r.classification, want, "{gen:?} {r:?}");
        assert_eq!(r.source, Source::Heuristic);
        assert_eq!(equivalence_series(&base, &other).unwrap().classification, want);
    }
    let close = one_row(n, SeqGen::OnePlusPower { coef: 1.0, alpha: -1.0 });
    let eq = equivalence_series(&base, &close).unwrap();
    assert!(eq.total() < std::f64::consts::PI.powi(2) / 3.0 + 1.0);
}

#[test]
fn mean_shift_cases() {
    let spec = constant_rows(1000, [1.0; 3], [0.0; 3]);
    let same: Vec<Vec<f64>> = (1..=3).map(|r| spec.a_row(r).to_vec()).collect();
    let r = mean_shift_equivalence(&spec, &same).unwrap();
    assert_eq!(r.total(), 0.0);
    assert_eq!(r.classification, Class::Convergent);
    let mut inv = same.clone();
    for (p, v) in inv[0].iter_mut().enumerate() {
        let n = spec.index_at(p).unsigned_abs().max(1) as f64;
        *v += 1.0 / n;
    }
    let spec_big = constant_rows(10_000, [1.0; 3], [0.0; 3]);
    let mut inv_big: Vec<Vec<f64>> = (1..=3).map(|r| spec_big.a_row(r).to_vec()).collect();
    for (p, v) in inv_big[0].iter_mut().enumerate() {
        *v += 1.0 / spec_big.index_at(p).unsigned_abs().max(1) as f64;
    }
    assert_eq!(mean_shift_equivalence(&spec_big, &inv_big).unwrap().classification, Class::Convergent);
    let shifted: Vec<Vec<f64>> = same.iter().map(|r| r.iter().map(|x| x + 0.5).collect()).collect();
    assert_eq!(mean_shift_equivalence(&spec, &shifted).unwrap().classification, Class::Divergent);
    assert!(mean_shift_equivalence(&spec, &inv[..2]).is_err());
}

#[test]
fn sigma1_identity_is_zero() {
    let spec = ex_011_11(100).unwrap();
    let e = elementary(3, 1, 2, 0.0).unwrap();
    let r = sigma1_series(&spec, &e, Sign::Plus, Sigma1Form::Reduced).unwrap();
    assert_eq!(r.total.total(), 0.0);
    assert_eq!(r.pairs.len(), 3);
}

#[test]
fn sigma1_scaled_rotation_decomposes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let spec = ex_011_11(100).unwrap();
    for _ in 0..10 {
        let mut q = random_orthogonal(3, &mut rng).unwrap();
        if q.det() < 0.0 {
            q = generic(q.matrix().mul(gaussrep_group::reflection(3, 1).unwrap().matrix()).unwrap()).unwrap();
        }
        let s = [rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)];
        // D q D⁻¹ via tau_r with a second reflection to undo P_r
        let t3 = tau_r(3, &q.matrix().mul(gaussrep_group::reflection(3, 3).unwrap().matrix()).unwrap().to_rows(), &s).unwrap();
        let r = sigma1_series(&spec, &t3, Sign::Plus, Sigma1Form::Full).unwrap();
        for ((i, j), pair) in &r.pairs {
            let scale = (s[i - 1] / s[j - 1]).sqrt();
            let sig = sigma_ij_scale(&spec, *i, *j, scale).unwrap();
            let w = q.get(i - 1, j - 1).powi(2);
            for (x, y) in pair.partial_sums.iter().zip(&sig.report.partial_sums) {
                assert!((x - w * y).abs() < 1e-8 * (1.0 + x.abs()), "{i}{j} {x} {}", w * y);
            }
        }
    }
}

#[test]
fn sigma1_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let spec = random_spec(&mut rng, 3, 100);
    let t = random_element(&mut rng, 3);
    let r = sigma1_series(&spec, &t, Sign::Minus, Sigma1Form::Full).unwrap();
    let mut upper = 0.0;
    let mut all = 0.0;
    for p in 0..spec.len() {
        let b: Vec<f64> = (1..=3).map(|k| spec.b_at(k, p)).collect();
        let mut x = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                x[i][j] = t.get(i, j) * (b[i] / b[j]).sqrt();
            }
        }
        let a = cof3(&x);
        for i in 0..3 {
            for j in 0..3 {
                let v = (x[i][j] + a[i][j]).powi(2);
                all += v;
                if i < j {
                    upper += v;
                }
            }
        }
    }
    assert!(rel(r.total.total(), upper) < 1e-12);
    assert!(rel(r.full.unwrap().total(), all) < 1e-12);
    assert!(matches!(
        sigma1_series(&spec, &t, Sign::Minus, Sigma1Form::Reduced),
        Err(MeasureError::NotInClass(_))
    ));
}

#[test]
fn sigma2_cases() {
    let spec = ex_a1(100).unwrap();
    let e = elementary(3, 1, 3, 0.0).unwrap();
    assert_eq!(sigma2_series(&spec, &e).unwrap().total(), 0.0);

    let witness = orthogonal_from_rankone(&[1.0, 1.0, -1.0], &[1.0; 3]).unwrap();
    let r = sigma2_series(&spec, &witness.element).unwrap();
    assert!(r.partial_sums.iter().all(|&v| v == 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spec = random_spec(&mut rng, 3, 100);
    let c = [0.5, -1.0, 2.0];
    let s = [1.0, 1.0, 1.0];
    let w = orthogonal_from_rankone(&c, &s).unwrap();
    let r = sigma2_series(&spec, &w.element).unwrap();
    let mut direct = 0.0;
    let mut rank_form = 0.0;
    for p in 0..spec.len() {
        let a: Vec<f64> = (1..=3).map(|k| spec.a_at(k, p)).collect();
        let ca: f64 = (0..3).map(|k| c[k] * a[k]).sum();
        let weight: f64 = (0..3).map(|k| spec.b_at(k + 1, p) * w.lambda[k].powi(2)).sum();
        rank_form += weight * ca * ca;
        for k in 0..3 {
            let v: f64 = (0..3).map(|j| (w.element.get(k, j) - if k == j { 1.0 } else { 0.0 }) * a[j]).sum();
            direct += spec.b_at(k + 1, p) * v * v;
        }
    }
    assert!(rel(r.total(), direct) < 1e-12);
    assert!(rel(r.total(), rank_form) < 1e-12);
}

#[test]
fn sigma2_dense_path_is_tiny_on_witness() {
    let spec = ex_a1(1000).unwrap();
    let w = orthogonal_from_rankone(&[1.0, 1.0, -1.0], &[1.0; 3]).unwrap();
    let dense = generic(w.element.matrix().clone()).unwrap();
    assert!(sigma2_series(&spec, &dense).unwrap().total() < 1e-25);
}

#[test]
fn sigma_ij_scale_cases() {
    let spec = ex_011_11(10_000).unwrap();
    let r = sigma_ij_scale(&spec, 2, 3, 1.0).unwrap();
    assert_eq!(r.report.total(), 0.0);
    assert_eq!(r.report.classification, Class::Convergent);
    let s = 1.3f64;
    let r = sigma_ij_scale(&spec, 2, 3, s).unwrap();
    let per = (s * s - 1.0 / (s * s)).powi(2);
    assert!(rel(r.report.total(), per * (2 * 10_000 + 1) as f64) < 1e-12);
    assert_eq!(r.report.classification, Class::Divergent);
    assert_eq!(r.residue_squares.classification, Class::Divergent);
    assert!(sigma_ij_scale(&spec, 2, 3, 0.0).is_err());
}

#[test]
fn scale_series_and_residues_agree() {
    // b_i/b_j = 1 + c_n with c_n = n^{-1}, n^{-1/2}, n^{-2}, 1
    let n = 10_000;
    for (alpha, coef) in [(-1.0, 1.0), (-0.5, 1.0), (-2.0, 0.5), (0.0, 1.0)] {
        let rows = vec![
            RowGen { b: SeqGen::OnePlusPower { coef, alpha }, a: SeqGen::constant(0.0) },
            RowGen { b: SeqGen::constant(1.0), a: SeqGen::constant(0.0) },
        ];
        let spec = MeasureSpec::from_generators(n, &rows).unwrap();
        let r = sigma_ij_scale(&spec, 1, 2, 1.0).unwrap();
        assert_eq!(r.report.classification, r.residue_squares.classification, "alpha={alpha}");
        let back = sigma_ij_scale(&spec, 2, 1, 1.0).unwrap();
        assert_eq!(r.report.classification, back.report.classification);
    }
}

#[test]
fn sigma_ij_mean_cases() {
    let spec = ex_a1(100).unwrap();
    assert_eq!(sigma_ij_mean(&spec, 1, 2, 0.0, 0.0).unwrap().total(), 0.0);
    // a_3 ≡ 3 and a_1 + a_2 = 3: with rows (3, ·) use a_j = −(C_i/C_j)a_i on a constant pair
    let spec = constant_rows(50, [1.0, 2.0, 1.0], [1.5, 0.0, -3.0]);
    assert_eq!(sigma_ij_mean(&spec, 1, 3, 2.0, 1.0).unwrap().total(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = random_spec(&mut rng, 3, 100);
    let direct: f64 = (0..spec.len())
        .map(|p| (0.25 * spec.b_at(1, p) + 4.0 * spec.b_at(2, p)) * (0.5 * spec.a_at(1, p) - 2.0 * spec.a_at(2, p)).powi(2))
        .sum();
    assert!(rel(sigma_ij_mean(&spec, 1, 2, 0.5, -2.0).unwrap().total(), direct) < 1e-12);
}

#[test]
fn s_r_cases() {
    let spec = constant_rows(1000, [1.0; 3], [0.0; 3]);
    for r in 1..=3 {
        let rep = s_r_series(&spec, r).unwrap();
        assert!(rel(rep.total(), 2001.0 / 3.0) < 1e-12);
        assert_eq!(rep.classification, Class::Divergent);
    }
    let spec = ex_011_11(10_000).unwrap();
    let pattern: Vec<Class> = (1..=3).map(|r| s_r_series(&spec, r).unwrap().classification).collect();
    assert_eq!(pattern, vec![Class::Convergent, Class::Divergent, Class::Divergent]);
}

#[test]
fn s_sum_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let spec = random_spec(&mut rng, 3, 200);
        let reps: Vec<SeriesReport> = (1..=3).map(|r| s_r_series(&spec, r).unwrap()).collect();
        for q in 0..4 {
            let sum: f64 = reps.iter().map(|r| r.partial_sums[q]).sum();
            let count = 2 * reps[0].truncations[q] + 1;
            assert!(sum >= 2.0 / 3.0 * count as f64 - 1e-9);
        }
    }
    let spec = MeasureSpec::new(vec![vec![1.0; 3], vec![2.0; 3]], vec![vec![0.0; 3]; 2]).unwrap();
    assert!(rel(s_k_general(&spec, 2).unwrap().total(), 6.0) < 1e-14);
    assert!(s_r_series(&spec, 1).is_err());
}

#[test]
fn s3_against_reduced_form() {
    // b = (1, n, n^2): b_3²/(b_1b_2) = n^3 vs b_3²/Σ = n^4/(n + n^2 + n^3), both divergent
    let rows = vec![
        RowGen { b: SeqGen::constant(1.0), a: SeqGen::constant(0.0) },
        RowGen { b: SeqGen::power(1.0), a: SeqGen::constant(0.0) },
        RowGen { b: SeqGen::power(2.0), a: SeqGen::constant(0.0) },
    ];
    let spec = MeasureSpec::from_generators(10_000, &rows).unwrap();
    let s3 = s_r_series(&spec, 3).unwrap();
    let reduced: Vec<f64> = (0..spec.len()).map(|p| spec.b_at(3, p).powi(2) / (spec.b_at(1, p) * spec.b_at(2, p))).collect();
    let red = SeriesReport::from_window_terms("reduced", &reduced);
    assert_eq!(s3.classification, red.classification);
    assert_eq!(s3.classification, Class::Divergent);
}

#[test]
#[allow(non_snake_case)]
fn sL_cases() {
    let rows = vec![
        RowGen { b: SeqGen::power(-2.0), a: SeqGen::constant(0.0) },
        RowGen { b: SeqGen::constant(1.0), a: SeqGen::constant(0.0) },
        RowGen { b: SeqGen::constant(1.0), a: SeqGen::constant(0.0) },
    ];
    let spec = MeasureSpec::from_generators(10_000, &rows).unwrap();
    assert_eq!(sL_series(&spec, 1, 2).unwrap().classification, Class::Convergent);
    assert_eq!(sL_series(&spec, 2, 1).unwrap().classification, Class::Divergent);
    let spec = ex_a1(100).unwrap();
    let fam = sL_family(&spec, 1, 0.0, 0.0).unwrap();
    let expect: f64 = (0..spec.len()).map(|p| 2.0 * spec.b_at(1, p) * spec.a_at(1, p).powi(2)).sum();
    assert!(rel(fam.total(), expect) < 1e-12);
    let (t, s) = (0.7, -1.1);
    let fam = sL_family(&spec, 2, t, s).unwrap();
    let expect: f64 = (0..spec.len())
        .map(|p| {
            let b2 = spec.b_at(2, p);
            t * t / 4.0 * b2 / spec.b_at(1, p)
                + s * s / 4.0 * b2 / spec.b_at(3, p)
                + b2 / 2.0 * (t * spec.a_at(1, p) - 2.0 * spec.a_at(2, p) + s * spec.a_at(3, p)).powi(2)
        })
        .sum();
    assert!(rel(fam.total(), expect) < 1e-12);
}

#[test]
fn normalize_row_one_cases() {
    let spec = constant_rows(20, [1.0, 2.0, 3.0], [0.5, 0.0, 1.0]);
    let norm = spec.normalize_row_one().unwrap();
    for r in 1..=3 {
        assert_eq!(norm.b_row(r), spec.b_row(r));
        assert_eq!(norm.a_row(r), spec.a_row(r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let spec = random_spec(&mut rng, 3, 500);
    let norm = spec.normalize_row_one().unwrap();
    for p in 0..spec.len() {
        assert_eq!(norm.b_at(1, p), 1.0);
        assert_eq!(norm.b_at(2, p), spec.b_at(2, p) / spec.b_at(1, p));
    }
    let classes = |s: &MeasureSpec| -> Vec<Class> {
        let mut v: Vec<Class> = (1..=3).map(|r| s_r_series(s, r).unwrap().classification).collect();
        v.push(sigma_ij_scale(s, 1, 2, 1.0).unwrap().report.classification);
        v.push(sigma_ij_mean(s, 2, 3, 1.0, -1.0).unwrap().classification);
        let w = orthogonal_from_rankone(&[1.0, 2.0, 0.5], &[1.0; 3]).unwrap();
        v.push(sigma2_series(s, &w.element).unwrap().classification);
        v
    };
    assert_eq!(classes(&spec), classes(&norm));
    let ex = ex_011_11(2000).unwrap();
    assert_eq!(classes(&ex), classes(&ex.normalize_row_one().unwrap()));
}

#[test]
fn zero_one_cases() {
    let n = 10_000;
    let b = one_row(n, SeqGen::power(1.0));
    let bs = b.b_row(1).to_vec();
    assert_eq!(zero_one_law(&bs, &bs).unwrap().0, 0);
    let small: Vec<f64> = bs.iter().enumerate().map(|(p, x)| x / (b.index_at(p).unsigned_abs().max(1) as f64).powi(2)).collect();
    assert_eq!(zero_one_law(&bs, &small).unwrap().0, 1);
}

#[test]
fn ratio_pair_agrees_on_families() {
    let n = 10_000;
    let len = 2 * n + 1;
    let idx = |p: usize| (p as i64 - n as i64).unsigned_abs().max(1) as f64;
    let families: Vec<(Vec<f64>, Vec<f64>)> = vec![
        ((0..len).map(|p| idx(p).powf(-2.0)).collect(), vec![1.0; len]),
        ((0..len).map(|_| 1.0).collect(), vec![2.0; len]),
        ((0..len).map(|p| idx(p).powf(-1.0)).collect(), vec![1.0; len]),
    ];
    for (x, y) in families {
        let (a, b) = ratio_pair(&x, &y).unwrap();
        assert_eq!(a.classification, b.classification);
    }
}

#[test]
fn two_series_equivalence_pairs() {
    let n = 10_000;
    for (coef, alpha) in [(1.0, -1.0), (0.5, 0.0), (1.0, -0.5), (-0.5, -1.5)] {
        let c: Vec<f64> = (-(n as i64)..=n as i64).map(|k| coef * (k.unsigned_abs().max(1) as f64).powf(alpha)).collect();
        let a: Vec<f64> = c.iter().map(|x| x * x / (1.0 + x)).collect();
        let b: Vec<f64> = c.iter().map(|x| x * x).collect();
        assert_eq!(
            SeriesReport::from_window_terms("a", &a).classification,
            SeriesReport::from_window_terms("b", &b).classification,
            "coef={coef} alpha={alpha}"
        );
    }
}

#[test]
fn classifier_basics() {
    let n = 10_000usize;
    let shells = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { (0..=n).map(|k| f(k.max(1) as f64)).collect() };
    assert_eq!(SeriesReport::from_shells("s", &shells(&|k| k.powi(-2))).classification, Class::Convergent);
    assert_eq!(SeriesReport::from_shells("h", &shells(&|k| 1.0 / k)).classification, Class::Divergent);
    assert_eq!(SeriesReport::from_shells("c", &shells(&|_| 0.3)).classification, Class::Divergent);
    assert_eq!(SeriesReport::from_shells("z", &shells(&|_| 0.0)).classification, Class::Convergent);
    assert_eq!(SeriesReport::from_shells("g", &shells(&|k| (-k).exp())).classification, Class::Convergent);
    let r = SeriesReport::from_shells("c", &shells(&|_| 1.0));
    assert!((r.growth_exponent_estimate - 1.0).abs() < 0.01);
    assert_eq!(r.truncations, vec![2500, 5000, 7500, 10_000]);
    assert!(r.partial_sums.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn declared_tags_override() {
    let spec = constant_rows(100, [1.0; 3], [0.0; 3]).with_tag("S_1(3)", Class::Convergent);
    let r = s_r_series(&spec, 1).unwrap();
    assert_eq!(r.classification, Class::Convergent);
    assert_eq!(r.source, Source::Declared);
    assert_eq!(s_r_series(&spec, 2).unwrap().source, Source::Heuristic);
}

#[test]
fn spec_json_round_trip() {
    let json = r#"{"m":3,"window":10,"rows":[
        {"b":{"kind":"constant","value":1.0},"a":{"kind":"alternating","even":1.0,"odd":2.0}},
        {"b":{"kind":"power","alpha":1.0},"a":{"kind":"alternating","even":2.0,"odd":1.0}},
        {"b":{"kind":"power","alpha":1.0},"a":{"kind":"constant","value":3.0}}],
        "tags":{"S_1(3)":"Convergent"}}"#;
    let spec = MeasureSpec::from_json(json).unwrap();
    let ex = ex_011_11(10).unwrap();
    for r in 1..=3 {
        assert_eq!(spec.b_row(r), ex.b_row(r));
        assert_eq!(spec.a_row(r), ex.a_row(r));
    }
    assert_eq!(spec.tags.get("S_1(3)"), Some(&Class::Convergent));
    assert_eq!(spec.b_at(2, spec.pos(0).unwrap()), 1.0);
    assert_eq!(spec.b_at(2, spec.pos(-7).unwrap()), 7.0);
    let bad = r#"{"m":1,"window":2,"rows":[{"b":{"kind":"constant","value":-1.0},"a":{"kind":"constant","value":0.0}}]}"#;
    assert!(matches!(MeasureSpec::from_json(bad), Err(MeasureError::InvalidFactor { .. })));
    let short = r#"{"m":1,"window":2,"rows":[{"b":{"kind":"list","values":[1,2]},"a":{"kind":"constant","value":0.0}}]}"#;
    assert!(matches!(MeasureSpec::from_json(short), Err(MeasureError::Shape(_))));
    assert!(named_example("nope", 3).is_err());
    assert_eq!(spec.with_window(20).unwrap().len(), 41);
}

#[test]
fn centered_orthogonality_paths() {
    let spec = constant_rows(1000, [1.0; 3], [0.0; 3]);
    let q = random_orthogonal(3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(centered_orthogonality(&spec, &q).unwrap().classification, Class::Convergent);
    let big = generic(DenseMatrix::from_rows(&[vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()).unwrap();
    let r = centered_orthogonality(&spec, &big).unwrap();
    assert_eq!((r.classification, r.source), (Class::Divergent, Source::Analytic));
    let k = kakutani_orthogonality(&spec, &big).unwrap();
    assert!(k.det_shortcut);
    assert_eq!(k.combined.classification, Class::Divergent);
}
