#![allow(dead_code)]

use gaussrep_linalg::DenseMatrix;
use rand::Rng;

pub fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, m: &[Vec<f64>], total: &mut f64) {
    let n = p.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        *total += sign * (0..n).map(|i| m[i][p[i]]).product::<f64>();
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, m, total);
        p.swap(k, i);
    }
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut r = r.clone();
        r.push(v);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
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

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Residual norm of least squares projection onto span, by modified Gram-Schmidt.
pub fn lsq_residual(f0: &[f64], span: &[Vec<f64>]) -> f64 {
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

/// min (At,t) over (t,b)=1 by conjugate gradients in the constraint plane.
pub fn projected_cg_qp(a: &[Vec<f64>], b: &[f64]) -> f64 {
    let n = b.len();
    let bb = dot(b, b);
    let project = |v: &[f64]| -> Vec<f64> {
        let c = dot(v, b) / bb;
        v.iter().zip(b).map(|(x, y)| x - c * y).collect()
    };
    let apply = |v: &[f64]| -> Vec<f64> { a.iter().map(|row| dot(row, v)).collect() };
    let mut t: Vec<f64> = b.iter().map(|x| x / bb).collect();
    let mut g = project(&apply(&t).iter().map(|x| 2.0 * x).collect::<Vec<_>>());
    let mut d: Vec<f64> = g.iter().map(|x| -x).collect();
    for _ in 0..4 * n {
        let gg = dot(&g, &g);
        if gg < 1e-30 {
            break;
        }
        let ad = apply(&d);
        let step = gg / (2.0 * dot(&d, &ad));
        t.iter_mut().zip(&d).for_each(|(x, y)| *x += step * y);
        let g_new = project(&apply(&t).iter().map(|x| 2.0 * x).collect::<Vec<_>>());
        let beta = dot(&g_new, &g_new) / gg;
        d = g_new.iter().zip(&d).map(|(x, y)| -x + beta * y).collect();
        g = g_new;
    }
    dot(&t, &apply(&t))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

/// QᵀQ + shift·I with Q square random.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize, shift: f64) -> Vec<Vec<f64>> {
    let q = random_matrix(rng, n, n);
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| q[k][i] * q[k][j]).sum::<f64>() + if i == j { shift } else { 0.0 }).collect())
        .collect()
}

pub fn dm(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}
