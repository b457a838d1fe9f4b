//! Symbolic Gaussian-moment engine: expressions are sums of terms
//! coef·Π_v x_v^p·exp(i u (x_v − a_v)), with exact expectations under the
//! product measure via Stein's identity.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gaussrep_measures::MeasureSpec;

pub type Var = (usize, i64);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C(pub f64, pub f64);

impl C {
    pub fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn conj(self) -> C {
        C(self.0, -self.1)
    }
    pub fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: C,
    pub vars: BTreeMap<Var, (u32, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct Expr(pub Vec<Term>);

pub struct Engine<'a> {
    pub spec: &'a MeasureSpec,
}

impl<'a> Engine<'a> {
    pub fn b(&self, v: Var) -> f64 {
        self.spec.b_at(v.0, self.spec.pos(v.1).unwrap())
    }
    pub fn a(&self, v: Var) -> f64 {
        self.spec.a_at(v.0, self.spec.pos(v.1).unwrap())
    }

    pub fn one(&self) -> Expr {
        Expr(vec![Term { coef: C(1.0, 0.0), vars: BTreeMap::new() }])
    }
    pub fn konst(&self, c: C) -> Expr {
        Expr(vec![Term { coef: c, vars: BTreeMap::new() }])
    }
    pub fn x(&self, v: Var) -> Expr {
        let mut vars = BTreeMap::new();
        vars.insert(v, (1, 0.0));
        Expr(vec![Term { coef: C(1.0, 0.0), vars }])
    }
    pub fn expi(&self, v: Var, u: f64) -> Expr {
        let mut vars = BTreeMap::new();
        vars.insert(v, (0, u));
        Expr(vec![Term { coef: C(1.0, 0.0), vars }])
    }
    pub fn sin(&self, v: Var, u: f64) -> Expr {
        // (e^{iu} − e^{−iu})/(2i)
        add(&scale(&self.expi(v, u), C(0.0, -0.5)), &scale(&self.expi(v, -u), C(0.0, 0.5)))
    }
    pub fn cos(&self, v: Var, u: f64) -> Expr {
        add(&scale(&self.expi(v, u), C(0.5, 0.0)), &scale(&self.expi(v, -u), C(0.5, 0.0)))
    }
    pub fn centered(&self, v: Var) -> Expr {
        add(&self.x(v), &self.konst(C(-self.a(v), 0.0)))
    }

    /// D_v = ∂_v − b_v (x_v − a_v)
    pub fn d(&self, v: Var, e: &Expr) -> Expr {
        let mut out = Vec::new();
        for t in &e.0 {
            if let Some(&(p, u)) = t.vars.get(&v) {
                if p > 0 {
                    let mut t2 = t.clone();
                    t2.coef = t.coef.mul(C(p as f64, 0.0));
                    t2.vars.insert(v, (p - 1, u));
                    out.push(t2);
                }
                if u != 0.0 {
                    let mut t2 = t.clone();
                    t2.coef = t.coef.mul(C(0.0, u));
                    out.push(t2);
                }
            }
        }
        let shifted = scale(&mul(&self.centered(v), e), C(-self.b(v), 0.0));
        out.extend(shifted.0);
        Expr(out)
    }

    /// E[(y+a)^p e^{iuy}], y ~ N(0, 1/2b)
    fn moment(&self, v: Var, p: u32, u: f64) -> C {
        let (a, b) = (self.a(v), self.b(v));
        let var = 0.5 / b;
        let mut m = vec![C((-var * u * u / 2.0).exp(), 0.0)];
        for q in 1..=p as usize {
            let mut next = m[q - 1].mul(C(0.0, u * var));
            if q >= 2 {
                next = next.add(m[q - 2].mul(C((q - 1) as f64 * var, 0.0)));
            }
            m.push(next);
        }
        let mut total = C(0.0, 0.0);
        let mut binom = 1.0;
        for q in 0..=p as usize {
            total = total.add(m[q].mul(C(binom * a.powi((p as usize - q) as i32), 0.0)));
            binom = binom * (p as usize - q) as f64 / (q + 1) as f64;
        }
        total
    }

    /// E[e₁·conj(e₂)]
    pub fn inner(&self, e1: &Expr, e2: &Expr) -> C {
        let mut total = C(0.0, 0.0);
        for t1 in &e1.0 {
            for t2 in &e2.0 {
                let mut c = t1.coef.mul(t2.coef.conj());
                let mut keys: Vec<Var> = t1.vars.keys().chain(t2.vars.keys()).copied().collect();
                keys.sort();
                keys.dedup();
                for v in keys {
                    let (p1, u1) = t1.vars.get(&v).copied().unwrap_or((0, 0.0));
                    let (p2, u2) = t2.vars.get(&v).copied().unwrap_or((0, 0.0));
                    c = c.mul(self.moment(v, p1 + p2, u1 - u2));
                }
                total = total.add(c);
            }
        }
        total
    }

    pub fn mean(&self, e: &Expr) -> C {
        self.inner(e, &self.one())
    }

    /// A_{kn} 1-style application: Σ_r x_{rk} D_{rn} applied to e.
    pub fn a_op(&self, k: i64, n: i64, e: &Expr) -> Expr {
        let mut out = Expr::default();
        for r in 1..=3 {
            out = add(&out, &mul(&self.x((r, k)), &self.d((r, n), e)));
        }
        out
    }
}

pub fn add(a: &Expr, b: &Expr) -> Expr {
    Expr(a.0.iter().chain(&b.0).cloned().collect())
}

pub fn scale(a: &Expr, c: C) -> Expr {
    Expr(a.0.iter().map(|t| Term { coef: t.coef.mul(c), vars: t.vars.clone() }).collect())
}

pub fn mul(a: &Expr, b: &Expr) -> Expr {
    let mut out = Vec::new();
    for t1 in &a.0 {
        for t2 in &b.0 {
            let mut vars = t1.vars.clone();
            for (v, (p, u)) in &t2.vars {
                let e = vars.entry(*v).or_insert((0, 0.0));
                e.0 += p;
                e.1 += u;
            }
            out.push(Term { coef: t1.coef.mul(t2.coef), vars });
        }
    }
    Expr(out)
}

/// Solves the dense system by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// min tᵀGt − 2tᵀh + τ subject to (t, c) = 1, via the KKT system.
pub fn constrained_qp(g: &[Vec<f64>], h: &[f64], tau: f64, c: &[f64]) -> f64 {
    let n = h.len();
    let mut kkt = vec![vec![0.0; n + 1]; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for i in 0..n {
        for j in 0..n {
            kkt[i][j] = 2.0 * g[i][j];
        }
        kkt[i][n] = c[i];
        kkt[n][i] = c[i];
        rhs[i] = 2.0 * h[i];
    }
    rhs[n] = 1.0;
    let sol = gauss_solve(kkt, rhs);
    let t = &sol[..n];
    let mut v = tau;
    for i in 0..n {
        v -= 2.0 * t[i] * h[i];
        for j in 0..n {
            v += t[i] * g[i][j] * t[j];
        }
    }
    v
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
