use gaussrep_measures::MeasureSpec;

use crate::moments::{char_fn, cos_i3, cos_variance, exp_variance, second_moment, sin_i3, sin_variance};
use crate::system::Assembled;
use crate::{KernelError, KernelKind, KernelResult, KernelSpec, Result};

/// Row r followed by the other two rows in cyclic order.
pub fn roles(r: usize) -> (usize, usize, usize) {
    (r, r % 3 + 1, (r + 1) % 3 + 1)
}

/// Generator indices ordered 0, −1, 1, −2, 2, … up to m, skipping `skip`.
pub(crate) fn ordered_indices(m: usize, skip: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(2 * m + 1);
    for j in 0..=m as i64 {
        for k in if j == 0 { vec![0] } else { vec![-j, j] } {
            if !skip.contains(&k) {
                out.push(k);
            }
        }
    }
    out
}

struct View<'a> {
    spec: &'a MeasureSpec,
}

impl View<'_> {
    fn pos(&self, k: i64) -> usize {
        (k + self.spec.window as i64) as usize
    }
    fn b(&self, r: usize, k: i64) -> f64 {
        self.spec.b_at(r, self.pos(k))
    }
    fn a(&self, r: usize, k: i64) -> f64 {
        self.spec.a_at(r, self.pos(k))
    }
    /// M x_{rk}² = 1/2b + a²
    fn c(&self, r: usize, k: i64) -> f64 {
        second_moment(self.a(r, k), self.b(r, k))
    }
    /// ‖D_{rn}1‖² = b/2
    fn d(&self, r: usize, n: i64) -> f64 {
        0.5 * self.b(r, n)
    }
}

#[derive(Default)]
struct Rows {
    lambda: Vec<f64>,
    gens: Vec<Vec<f64>>,
    cons: Vec<f64>,
    cons_im: Vec<f64>,
    lambda_s: Vec<f64>,
    gens_s: Vec<Vec<f64>>,
    cons_s: Vec<f64>,
}

struct Entry {
    lambda: f64,
    gen: Vec<f64>,
    cons: f64,
    cons_im: f64,
    lambda_s: f64,
    gen_s: Vec<f64>,
    cons_s: f64,
}

fn assemble(indices: Vec<i64>, complex: bool, f: impl Fn(i64) -> Entry) -> Assembled {
    let mut rows = Rows::default();
    for &k in &indices {
        let e = f(k);
        rows.lambda.push(e.lambda);
        rows.gens.push(e.gen);
        rows.cons.push(e.cons);
        rows.cons_im.push(e.cons_im);
        rows.lambda_s.push(e.lambda_s);
        rows.gens_s.push(e.gen_s);
        rows.cons_s.push(e.cons_s);
    }
    Assembled {
        indices,
        lambda: rows.lambda,
        generators: rows.gens,
        constraint: rows.cons,
        constraint_im: complex.then_some(rows.cons_im),
        lambda_simplified: rows.lambda_s,
        generators_simplified: rows.gens_s,
        constraint_simplified: rows.cons_s,
    }
}

fn check_ranges(spec: &MeasureSpec, ks: &KernelSpec) -> Result<()> {
    ks.validate()?;
    spec.require_rows(3)?;
    if ks.truncation > spec.window {
        return Err(KernelError::TruncationTooLarge { truncation: ks.truncation, window: spec.window });
    }
    for n in std::iter::once(ks.target).chain(ks.partner) {
        spec.pos(n)?;
    }
    Ok(())
}

/// Evaluates one kernel on the spec.
pub fn run_kernel(spec: &MeasureSpec, ks: &KernelSpec) -> Result<KernelResult> {
    check_ranges(spec, ks)?;
    let v = View { spec };
    let m = ks.truncation;
    let n = ks.target;
    let (r, i, j) = roles(ks.row);
    let phase = |k: i64| ks.phase.at(v.b(r, k), k, spec.window);
    let sys = match ks.kind {
        KernelKind::DByA => assemble(ordered_indices(m, &[n]), false, |k| Entry {
            lambda: [r, i, j].iter().map(|&s| 0.5 / v.b(s, k) * v.d(s, n)).sum(),
            gen: vec![v.a(i, k) * v.d(i, n).sqrt(), v.a(j, k) * v.d(j, n).sqrt()],
            cons: v.a(r, k),
            cons_im: 0.0,
            lambda_s: [r, i, j].iter().map(|&s| 0.5 / v.b(s, k)).sum(),
            gen_s: vec![v.a(i, k), v.a(j, k)],
            cons_s: v.a(r, k),
        }),
        KernelKind::XxByAa => {
            let t = ks.partner.unwrap_or(n);
            let cc = |s: usize| v.c(s, n) * v.c(s, t);
            let aa = |s: usize| v.a(s, n) * v.a(s, t);
            // W = [[c_in c_it, p], [p, c_jn c_jt]] = L Lᵀ
            let p = aa(i) * aa(j);
            let l11 = cc(i).sqrt();
            let l21 = p / l11;
            let l22 = (cc(j) - l21 * l21).max(0.0).sqrt();
            let pair = |x: usize, y: usize, k: i64| {
                (v.c(x, n) * v.c(y, t) + v.c(y, n) * v.c(x, t) + 2.0 * aa(x) * aa(y)) * v.d(x, k) * v.d(y, k)
            };
            assemble(ordered_indices(m, &[n, t]), false, |k| {
                let (ui, uj) = (v.d(i, k), v.d(j, k));
                let sum: f64 = [r, i, j].iter().map(|&s| v.b(s, k)).sum();
                Entry {
                    lambda: [r, i, j].iter().map(|&s| 2.0 * v.d(s, k).powi(2) * cc(s)).sum::<f64>()
                        + pair(r, i, k)
                        + pair(r, j, k)
                        + pair(i, j, k),
                    gen: vec![l11 * ui + l21 * uj, l22 * uj],
                    cons: -v.d(r, k),
                    cons_im: 0.0,
                    lambda_s: sum * sum - v.b(i, k).powi(2) - v.b(j, k).powi(2),
                    gen_s: vec![v.b(i, k), v.b(j, k)],
                    cons_s: v.b(r, k),
                }
            })
        }
        KernelKind::XByDa => {
            // target x_{rk} with k = target; generators D_{rn}A_{kn} over n
            let k = n;
            assemble(ordered_indices(m, &[k]), false, |g| Entry {
                lambda: v.d(r, g) * (2.0 * v.c(r, k) * v.d(r, g) + v.c(i, k) * v.d(i, g) + v.c(j, k) * v.d(j, g)),
                gen: vec![],
                cons: -v.d(r, g),
                cons_im: 0.0,
                lambda_s: v.b(r, g) * [r, i, j].iter().map(|&s| v.b(s, g)).sum::<f64>(),
                gen_s: vec![],
                cons_s: v.b(r, g),
            })
        }
        KernelKind::DByXa => assemble(ordered_indices(m, &[n]), false, |k| {
            let (ar, br) = (v.a(r, k), v.b(r, k));
            let cr = v.c(r, k);
            let g = vec![ar * v.a(i, k) * v.d(i, n).sqrt(), ar * v.a(j, k) * v.d(j, n).sqrt()];
            let full = 0.5 / br * (1.0 / br + 4.0 * ar * ar) * v.d(r, n) + cr * v.c(i, k) * v.d(i, n) + cr * v.c(j, k) * v.d(j, n);
            let inv: f64 = [r, i, j].iter().map(|&s| 0.5 / v.b(s, k)).sum();
            let ai2 = v.a(i, k).powi(2) + v.a(j, k).powi(2);
            Entry {
                lambda: full - g.iter().map(|x| x * x).sum::<f64>(),
                gen: g,
                cons: cr,
                cons_im: 0.0,
                lambda_s: cr * (inv + ai2) - ar * ar * ai2,
                gen_s: vec![ar * v.a(i, k), ar * v.a(j, k)],
                cons_s: cr,
            }
        }),
        KernelKind::XByShiftedXa => assemble(ordered_indices(m, &[n]), false, |k| {
            let h = 0.5 / v.b(r, k);
            let inv: f64 = [r, i, j].iter().map(|&s| 0.5 / v.b(s, k)).sum();
            let a2: f64 = [r, i, j].iter().map(|&s| v.a(s, k).powi(2)).sum();
            Entry {
                lambda: h * (v.c(i, k) * v.d(i, n) + v.c(j, k) * v.d(j, n) + (2.0 * h + v.a(r, k).powi(2)) * v.d(r, n)),
                gen: vec![],
                cons: h,
                cons_im: 0.0,
                lambda_s: h * (inv + a2),
                gen_s: vec![],
                cons_s: h,
            }
        }),
        KernelKind::DByExpA => assemble(ordered_indices(m, &[n]), true, |k| {
            let (ar, br, s) = (v.a(r, k), v.b(r, k), phase(k));
            let f = char_fn(br, s);
            let g = vec![f * v.a(i, k) * v.d(i, n).sqrt(), f * v.a(j, k) * v.d(j, n).sqrt()];
            let var = exp_variance(ar, br, s);
            let full = v.c(i, k) * v.d(i, n) + v.c(j, k) * v.d(j, n) + var * v.d(r, n);
            Entry {
                lambda: full - g.iter().map(|x| x * x).sum::<f64>(),
                gen: g,
                cons: -s / (2.0 * br) * f,
                cons_im: ar * f,
                lambda_s: 0.5 / v.b(i, k) + 0.5 / v.b(j, k) + var,
                gen_s: vec![v.a(i, k), v.a(j, k)],
                cons_s: -s / (2.0 * br) * f,
            }
        }),
        KernelKind::DBySinA => assemble(ordered_indices(m, &[n]), false, |k| {
            let (ar, br, s) = (v.a(r, k), v.b(r, k), phase(k));
            let i3 = sin_i3(br, s);
            let var = sin_variance(ar, br, s);
            let mean = s / (2.0 * br) * char_fn(br, s);
            Entry {
                lambda: i3 * (v.c(i, k) * v.d(i, n) + v.c(j, k) * v.d(j, n)) + var * v.d(r, n),
                gen: vec![],
                cons: mean,
                cons_im: 0.0,
                lambda_s: i3 * (v.c(i, k) + v.c(j, k)) + var,
                gen_s: vec![],
                cons_s: mean,
            }
        }),
        KernelKind::DByCosA => assemble(ordered_indices(m, &[n]), false, |k| {
            let (ar, br, s) = (v.a(r, k), v.b(r, k), phase(k));
            let f = char_fn(br, s);
            let i3 = cos_i3(br, s);
            let var = cos_variance(ar, br, s);
            let g = vec![f * v.a(i, k) * v.d(i, n).sqrt(), f * v.a(j, k) * v.d(j, n).sqrt()];
            let full = i3 * (v.c(i, k) * v.d(i, n) + v.c(j, k) * v.d(j, n)) + var * v.d(r, n);
            Entry {
                lambda: full - g.iter().map(|x| x * x).sum::<f64>(),
                gen: g,
                cons: ar * f,
                cons_im: 0.0,
                lambda_s: i3 * (v.c(i, k) + v.c(j, k)) + var,
                gen_s: vec![],
                cons_s: ar * f,
            }
        }),
        KernelKind::XxPlusXx => {
            // target x_{2k}x_{2t} + x_{3k}x_{3t}; generators A_{kn}A_{tn} over n
            let (k, t) = (n, ks.partner.unwrap_or(n));
            let idx = ordered_indices(m, &[k, t]);
            if let Some(&g) = idx.iter().find(|&&g| (v.b(2, g) - v.b(3, g)).abs() > 1e-12 * v.b(2, g)) {
                return Err(KernelError::InvalidParams(format!("XXplusXX needs b_2 = b_3; they differ at index {g}")));
            }
            let cc = |s: usize| v.c(s, k) * v.c(s, t);
            let aa = |s: usize| v.a(s, k) * v.a(s, t);
            let pair = |x: usize, y: usize, g: i64| {
                (v.c(x, k) * v.c(y, t) + v.c(y, k) * v.c(x, t) + 2.0 * aa(x) * aa(y)) * v.d(x, g) * v.d(y, g)
            };
            assemble(idx, false, |g| {
                let sum: f64 = (1..=3).map(|s| v.b(s, g)).sum();
                Entry {
                    lambda: (1..=3).map(|s| 2.0 * v.d(s, g).powi(2) * cc(s)).sum::<f64>()
                        + pair(1, 2, g)
                        + pair(1, 3, g)
                        + pair(2, 3, g),
                    gen: vec![cc(1).sqrt() * v.d(1, g)],
                    cons: -v.d(2, g),
                    cons_im: 0.0,
                    lambda_s: sum * sum - v.b(1, g).powi(2),
                    gen_s: vec![v.b(1, g)],
                    cons_s: v.b(2, g),
                }
            })
        }
        KernelKind::XFromPairs => {
            // target x_{rk}; generators x_{2k}x_{2n} + x_{3k}x_{3n} over n
            let k = n;
            let q = if r == 2 { 3 } else { 2 };
            assemble(ordered_indices(m, &[k]), false, |g| Entry {
                lambda: v.c(r, k) * 0.5 / v.b(r, g) + v.c(q, k) * 0.5 / v.b(q, g),
                gen: vec![v.c(q, k).sqrt() * v.a(q, g)],
                cons: v.a(r, g),
                cons_im: 0.0,
                lambda_s: 0.5 / v.b(r, g) + 0.5 / v.b(q, g) + v.a(q, g).powi(2),
                gen_s: vec![],
                cons_s: v.a(r, g),
            })
        }
    };
    sys.solve(ks.kind, ks.row, ks.target, ks.partner, m)
}
