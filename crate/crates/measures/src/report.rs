use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Declared,
    Heuristic,
    /// Decided by an exact criterion rather than by partial sums.
    Analytic,
}

/// Thresholds of the truncation-scale classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classifier {
    pub divergence_growth: f64,
    pub slow_decay: f64,
    pub tail_share: f64,
    pub decay: f64,
    pub relaxed_tail_share: f64,
    pub relaxed_decay: f64,
    /// Totals at or below this are rounding noise and count as zero.
    pub zero_floor: f64,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier {
            divergence_growth: 0.1,
            slow_decay: 1.05,
            tail_share: 1e-6,
            decay: 1.1,
            relaxed_tail_share: 1e-3,
            relaxed_decay: 1.5,
            zero_floor: 1e-20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub name: String,
    pub window: usize,
    /// Truncations N/4, N/2, 3N/4, N of the shell index |n|.
    pub truncations: Vec<usize>,
    pub partial_sums: Vec<f64>,
    /// Log-log slope of the partial sums over the last three quarters.
    pub growth_exponent_estimate: f64,
    /// p in shell terms ~ |n|^{-p}, fitted on block means over the last three quarters.
    pub term_decay_exponent: f64,
    /// Share of the total contributed by the last quarter.
    pub tail_share: f64,
    pub classification: Class,
    pub source: Source,
}

fn regress(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

fn log_points(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..count)
        .map(|j| {
            let x = (lo as f64) * ((hi as f64) / (lo as f64)).powf(j as f64 / (count - 1) as f64);
            (x.round() as usize).clamp(lo, hi)
        })
        .collect();
    v.dedup();
    v
}

impl SeriesReport {
    /// Builds a report from shell sums: `shells[k]` is the sum of the terms with |n| = k, k = 0..=N.
    pub fn from_shells(name: impl Into<String>, shells: &[f64]) -> Self {
        Self::from_shells_with(name, shells, &Classifier::default())
    }

    pub fn from_shells_with(name: impl Into<String>, shells: &[f64], c: &Classifier) -> Self {
        let big_n = shells.len().saturating_sub(1).max(1);
        let mut cumulative = Vec::with_capacity(shells.len());
        let mut acc = 0.0;
        for s in shells {
            acc += s;
            cumulative.push(acc);
        }
        let at = |t: usize| cumulative[t.min(cumulative.len() - 1)];
        let truncations: Vec<usize> = (1..=4).map(|j| (big_n * j / 4).max(1)).collect();
        let partial_sums: Vec<f64> = truncations.iter().map(|&t| at(t)).collect();
        let total = at(big_n);
        let q1 = truncations[0];
        let q3 = truncations[2];

        let pts = log_points(q1, big_n, 32);
        let usable: Vec<(f64, f64)> = pts
            .iter()
            .filter(|&&t| at(t) > 0.0)
            .map(|&t| ((t as f64).ln(), at(t).ln()))
            .collect();
        let growth = if usable.len() >= 2 {
            let (x, y): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
            regress(&x, &y)
        } else {
            0.0
        };

        let edges = log_points(q1.max(1), big_n + 1, 17);
        let mut bx = Vec::new();
        let mut by = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let mean = shells[lo..hi.min(shells.len())].iter().sum::<f64>() / (hi - lo) as f64;
            if mean > 0.0 {
                bx.push(((lo as f64) * (hi as f64 - 1.0).max(lo as f64)).sqrt().ln());
                by.push(mean.ln());
            }
        }
        let tail = total - at(q3);
        let tail_share = if total != 0.0 { tail / total } else { 0.0 };
        let decay = if bx.len() >= 3 {
            -regress(&bx, &by)
        } else if tail == 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        };

        let classification = if total.abs() <= c.zero_floor || tail == 0.0 {
            Class::Convergent
        } else if decay < c.slow_decay || (growth > c.divergence_growth && !(decay >= c.relaxed_decay)) {
            Class::Divergent
        } else if (tail_share < c.tail_share && decay > c.decay)
            || (tail_share < c.relaxed_tail_share && decay >= c.relaxed_decay)
        {
            Class::Convergent
        } else {
            Class::Inconclusive
        };

        SeriesReport {
            name: name.into(),
            window: big_n,
            truncations,
            partial_sums,
            growth_exponent_estimate: growth,
            term_decay_exponent: decay,
            tail_share,
            classification,
            source: Source::Heuristic,
        }
    }

    /// Builds from window-ordered terms (n = −N..N).
    pub fn from_window_terms(name: impl Into<String>, terms: &[f64]) -> Self {
        Self::from_shells(name, &shells(terms))
    }

    /// A report whose class is fixed by an exact criterion.
    pub fn analytic(mut self, class: Class) -> Self {
        self.classification = class;
        self.source = Source::Analytic;
        self
    }

    pub fn with_tags(mut self, tags: &BTreeMap<String, Class>) -> Self {
        if let Some(&c) = tags.get(&self.name) {
            self.classification = c;
            self.source = Source::Declared;
        }
        self
    }

    pub fn total(&self) -> f64 {
        *self.partial_sums.last().unwrap_or(&0.0)
    }
}

/// Folds window-ordered terms (length 2N+1) into shells by |n|.
pub(crate) fn shells(terms: &[f64]) -> Vec<f64> {
    let big_n = terms.len() / 2;
    let mut out = vec![0.0; big_n + 1];
    for (i, t) in terms.iter().enumerate() {
        let k = (i as i64 - big_n as i64).unsigned_abs() as usize;
        out[k] += t;
    }
    out
}
