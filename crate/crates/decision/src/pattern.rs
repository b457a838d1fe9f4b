use gaussrep_measures::{Class, MeasureSpec};
use serde::{Deserialize, Serialize};

/// One entry of a 0/1 pattern: 0 for a convergent series, 1 for a divergent one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bit {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "?")]
    Unknown,
}

impl Bit {
    pub fn of(class: Class) -> Bit {
        match class {
            Class::Convergent => Bit::Zero,
            Class::Divergent => Bit::One,
            Class::Inconclusive => Bit::Unknown,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
            Bit::Unknown => '?',
        }
    }

    pub fn value(self) -> Option<usize> {
        match self {
            Bit::Zero => Some(0),
            Bit::One => Some(1),
            Bit::Unknown => None,
        }
    }
}

pub type Triple = [Bit; 3];

/// "(0,1,1)"
pub fn pattern_string(bits: &[Bit]) -> String {
    let inner: Vec<String> = bits.iter().map(|b| b.symbol().to_string()).collect();
    format!("({})", inner.join(","))
}

/// Asymptotic behaviour of a positive sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Infinite,
    Positive { value: f64 },
    Zero,
    /// No single limit on the tail.
    Oscillating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub name: String,
    pub limit: Limit,
    /// Log-log slope over N/4 ≤ |n| ≤ N.
    pub slope: f64,
    /// max/min over the last quarter.
    pub spread: f64,
}

const SLOPE_TOL: f64 = 0.1;
const SPREAD_TOL: f64 = 1.5;

/// Reads off lim_n f(n) from the window tail; `f` takes a window position.
pub fn tail_limit(spec: &MeasureSpec, name: &str, f: impl Fn(usize) -> f64) -> LimitReport {
    let big_n = spec.window as i64;
    let lo = (big_n / 4).max(1);
    let q3 = (3 * big_n / 4).max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut tail_min = f64::INFINITY;
    let mut tail_max = 0.0f64;
    let mut edge = Vec::new();
    for pos in 0..spec.len() {
        let n = spec.index_at(pos).abs();
        if n < lo {
            continue;
        }
        let v = f(pos);
        if v > 0.0 && v.is_finite() {
            xs.push((n as f64).ln());
            ys.push(v.ln());
        }
        if n >= q3 {
            tail_min = tail_min.min(v);
            tail_max = tail_max.max(v);
        }
        if n == big_n {
            edge.push(v);
        }
    }
    let slope = regress(&xs, &ys);
    let spread = if tail_min > 0.0 { tail_max / tail_min } else { f64::INFINITY };
    let limit = if slope > SLOPE_TOL {
        Limit::Infinite
    } else if slope < -SLOPE_TOL {
        Limit::Zero
    } else if spread > SPREAD_TOL {
        Limit::Oscillating
    } else {
        Limit::Positive { value: edge.iter().sum::<f64>() / edge.len().max(1) as f64 }
    };
    LimitReport { name: name.to_string(), limit, slope, spread }
}

fn regress(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
