use serde::{Deserialize, Serialize};

/// One-dimensional Gaussian √(b/π)·exp(−b(x−a)²): precision b, mean a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFactor {
    pub b: f64,
    pub a: f64,
}

impl GaussianFactor {
    pub fn new(b: f64, a: f64) -> Option<Self> {
        (b > 0.0 && b.is_finite() && a.is_finite()).then_some(GaussianFactor { b, a })
    }

    pub fn density(&self, x: f64) -> f64 {
        (self.b / std::f64::consts::PI).sqrt() * (-self.b * (x - self.a).powi(2)).exp()
    }

    pub fn variance(&self) -> f64 {
        0.5 / self.b
    }
}

/// ∫√(dp dq) in closed form; `centered` ignores both means.
pub fn hellinger_factor(p: GaussianFactor, q: GaussianFactor, centered: bool) -> f64 {
    let (b, bq) = (p.b, q.b);
    let scale = (4.0 * b * bq / (b + bq).powi(2)).powf(0.25);
    if centered {
        scale
    } else {
        scale * (-b * bq * (p.a - q.a).powi(2) / (2.0 * (b + bq))).exp()
    }
}

/// ∫√(dp dq) by double-exponential quadrature, split at both means.
pub fn hellinger_quadrature(p: GaussianFactor, q: GaussianFactor, centered: bool) -> f64 {
    let (p, q) = if centered {
        (GaussianFactor { a: 0.0, ..p }, GaussianFactor { a: 0.0, ..q })
    } else {
        (p, q)
    };
    let f = |x: f64| (p.density(x) * q.density(x)).sqrt();
    let mut cuts = vec![];
    for g in [p, q] {
        let w = 1.0 / g.b.sqrt();
        for k in [-14.0, -3.0, 0.0, 3.0, 14.0] {
            cuts.push(g.a + k * w);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    cuts.windows(2)
        .map(|w| quadrature::integrate(f, w[0], w[1], 1e-14).integral)
        .sum()
}
