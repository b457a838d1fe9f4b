use serde::{Deserialize, Serialize};

/// Complex value as a (re, im) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Moments of one Gaussian coordinate x with density √(b/π)·exp(−b(x−a)²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "moment", rename_all = "snake_case")]
pub enum Moment {
    /// M exp(is(x−a)) = exp(−s²/4b)
    CharFn { b: f64, s: f64 },
    /// M ix·exp(is(x−a)) = (−s/2b + ia)·exp(−s²/4b)
    FirstMoment { a: f64, b: f64, s: f64 },
    /// M x·sin(s(x−a)) = (s/2b)·exp(−s²/4b)
    SinMean { a: f64, b: f64, s: f64 },
    /// M x·cos(s(x−a)) = a·exp(−s²/4b)
    CosMean { a: f64, b: f64, s: f64 },
    /// M sin²(s(x−a)) = (1 − exp(−s²/b))/2
    SinI3 { b: f64, s: f64 },
    /// M cos²(s(x−a)) = (1 + exp(−s²/b))/2
    CosI3 { b: f64, s: f64 },
    /// M x²(x−a)² = 3/(2b)² + a²/2b
    ShiftSquare { a: f64, b: f64 },
    /// M x⁴ − (M x²)² = (1/2b)(2/2b + 4a²)
    SquareVariance { a: f64, b: f64 },
    /// M|ix·e^{is(x−a)}|² − |M ix·e^{is(x−a)}|²
    ExpVariance { a: f64, b: f64, s: f64 },
    /// Variance of x·sin(s(x−a))
    SinVariance { a: f64, b: f64, s: f64 },
    /// Variance of x·cos(s(x−a))
    CosVariance { a: f64, b: f64, s: f64 },
    /// min over s of the exp variance
    MinExpVariance { a: f64, b: f64 },
}

pub fn char_fn(b: f64, s: f64) -> f64 {
    (-s * s / (4.0 * b)).exp()
}

pub fn second_moment(a: f64, b: f64) -> f64 {
    0.5 / b + a * a
}

pub fn sin_i3(b: f64, s: f64) -> f64 {
    0.5 * (1.0 - (-s * s / b).exp())
}

pub fn cos_i3(b: f64, s: f64) -> f64 {
    0.5 * (1.0 + (-s * s / b).exp())
}

pub fn exp_variance(a: f64, b: f64, s: f64) -> f64 {
    second_moment(a, b) - (s * s / (4.0 * b * b) + a * a) * (-s * s / (2.0 * b)).exp()
}

pub fn sin_variance(a: f64, b: f64, s: f64) -> f64 {
    let e = (-s * s / b).exp();
    0.5 * (second_moment(a, b) * (1.0 - e) + s * s / (b * b) * e) - s * s / (4.0 * b * b) * (-s * s / (2.0 * b)).exp()
}

pub fn cos_variance(a: f64, b: f64, s: f64) -> f64 {
    let e = (-s * s / b).exp();
    0.5 * (second_moment(a, b) * (1.0 + e) - s * s / (b * b) * e) - a * a * (-s * s / (2.0 * b)).exp()
}

/// Closed-form minimum over s of the exp variance, with the minimizing s ≥ 0.
pub fn min_exp_variance(a: f64, b: f64) -> (f64, f64) {
    let x0 = 1.0 - 2.0 * b * a * a;
    if x0 >= 0.0 {
        ((1.0 - (-x0).exp()) / (2.0 * b) + a * a, (2.0 * b * x0).sqrt())
    } else {
        (0.5 / b, 0.0)
    }
}

pub fn gaussian_moment(m: Moment) -> Complex {
    match m {
        Moment::CharFn { b, s } => Complex::real(char_fn(b, s)),
        Moment::FirstMoment { a, b, s } => {
            let f = char_fn(b, s);
            Complex { re: -s / (2.0 * b) * f, im: a * f }
        }
        Moment::SinMean { b, s, .. } => Complex::real(s / (2.0 * b) * char_fn(b, s)),
        Moment::CosMean { a, b, s } => Complex::real(a * char_fn(b, s)),
        Moment::SinI3 { b, s } => Complex::real(sin_i3(b, s)),
        Moment::CosI3 { b, s } => Complex::real(cos_i3(b, s)),
        Moment::ShiftSquare { a, b } => Complex::real(3.0 / (4.0 * b * b) + a * a / (2.0 * b)),
        Moment::SquareVariance { a, b } => Complex::real(0.5 / b * (1.0 / b + 4.0 * a * a)),
        Moment::ExpVariance { a, b, s } => Complex::real(exp_variance(a, b, s)),
        Moment::SinVariance { a, b, s } => Complex::real(sin_variance(a, b, s)),
        Moment::CosVariance { a, b, s } => Complex::real(cos_variance(a, b, s)),
        Moment::MinExpVariance { a, b } => Complex::real(min_exp_variance(a, b).0),
    }
}

/// ∫ f dμ_(b,a) by double-exponential quadrature over ±14 widths, cut into
/// pieces short enough to resolve oscillation at frequency `freq`.
pub fn gaussian_expectation(a: f64, b: f64, freq: f64, f: impl Fn(f64) -> f64) -> f64 {
    let w = 1.0 / b.sqrt();
    let (lo, hi) = (a - 14.0 * w, a + 14.0 * w);
    let step = w.min(1.0 / (freq.abs() + 1.0));
    let pieces = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / pieces as f64;
    let norm = (b / std::f64::consts::PI).sqrt();
    let g = |x: f64| norm * (-b * (x - a) * (x - a)).exp() * f(x);
    (0..pieces)
        .map(|i| quadrature::integrate(g, lo + i as f64 * h, lo + (i + 1) as f64 * h, 1e-15).integral)
        .sum()
}

fn quad_variance(a: f64, b: f64, s: f64, re: impl Fn(f64) -> f64, im: impl Fn(f64) -> f64) -> f64 {
    let sq = gaussian_expectation(a, b, 2.0 * s, |x| re(x).powi(2) + im(x).powi(2));
    let mr = gaussian_expectation(a, b, s, &re);
    let mi = gaussian_expectation(a, b, s, &im);
    sq - mr * mr - mi * mi
}

/// The same moments evaluated by numerical integration.
pub fn moment_by_quadrature(m: Moment) -> Complex {
    match m {
        Moment::CharFn { b, s } => Complex {
            re: gaussian_expectation(0.0, b, s, |x| (s * x).cos()),
            im: gaussian_expectation(0.0, b, s, |x| (s * x).sin()),
        },
        Moment::FirstMoment { a, b, s } => Complex {
            re: gaussian_expectation(a, b, s, |x| -x * (s * (x - a)).sin()),
            im: gaussian_expectation(a, b, s, |x| x * (s * (x - a)).cos()),
        },
        Moment::SinMean { a, b, s } => Complex::real(gaussian_expectation(a, b, s, |x| x * (s * (x - a)).sin())),
        Moment::CosMean { a, b, s } => Complex::real(gaussian_expectation(a, b, s, |x| x * (s * (x - a)).cos())),
        Moment::SinI3 { b, s } => Complex::real(gaussian_expectation(0.0, b, 2.0 * s, |x| (s * x).sin().powi(2))),
        Moment::CosI3 { b, s } => Complex::real(gaussian_expectation(0.0, b, 2.0 * s, |x| (s * x).cos().powi(2))),
        Moment::ShiftSquare { a, b } => Complex::real(gaussian_expectation(a, b, 0.0, |x| (x * (x - a)).powi(2))),
        Moment::SquareVariance { a, b } => Complex::real(quad_variance(a, b, 0.0, |x| x * x, |_| 0.0)),
        Moment::ExpVariance { a, b, s } => {
            Complex::real(quad_variance(a, b, s, |x| -x * (s * (x - a)).sin(), |x| x * (s * (x - a)).cos()))
        }
        Moment::SinVariance { a, b, s } => Complex::real(quad_variance(a, b, s, |x| x * (s * (x - a)).sin(), |_| 0.0)),
        Moment::CosVariance { a, b, s } => Complex::real(quad_variance(a, b, s, |x| x * (s * (x - a)).cos(), |_| 0.0)),
        Moment::MinExpVariance { a, b } => {
            // golden-section search on the quadrature variance over x = s/√(2b) ∈ [0, 3]
            let f = |x: f64| moment_by_quadrature(Moment::ExpVariance { a, b, s: x * (2.0 * b).sqrt() }).re;
            let (mut lo, mut hi) = (0.0f64, 3.0f64);
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let (x1, x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
                if f(x1) <= f(x2) {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            Complex::real(f(0.5 * (lo + hi)).min(f(0.0)))
        }
    }
}
