use serde::{Deserialize, Serialize};

use crate::{MeasureError, Result};

fn one() -> f64 {
    1.0
}

/// Real sequence indexed by n ∈ ℤ. Power-type generators use max(|n|,1), so index 0 takes the value at |n| = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeqGen {
    Constant { value: f64 },
    /// scale·max(|n|,1)^alpha
    Power {
        alpha: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// scale·max(|n|,1)^alpha·ln(e+|n|)^beta
    LogPower {
        alpha: f64,
        beta: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Parity of |n| selects the value.
    Alternating { even: f64, odd: f64 },
    /// 1 + coef·max(|n|,1)^alpha
    OnePlusPower { coef: f64, alpha: f64 },
    /// Values for n = −N..N in order; must match the window.
    List { values: Vec<f64> },
}

impl SeqGen {
    pub fn constant(value: f64) -> Self {
        SeqGen::Constant { value }
    }

    pub fn power(alpha: f64) -> Self {
        SeqGen::Power { alpha, scale: 1.0 }
    }

    pub fn value(&self, n: i64, window: usize) -> f64 {
        let k = n.unsigned_abs().max(1) as f64;
        match self {
            SeqGen::Constant { value } => *value,
            SeqGen::Power { alpha, scale } => scale * k.powf(*alpha),
            SeqGen::LogPower { alpha, beta, scale } => {
                scale * k.powf(*alpha) * (std::f64::consts::E + n.unsigned_abs() as f64).ln().powf(*beta)
            }
            SeqGen::Alternating { even, odd } => {
                if n.unsigned_abs() % 2 == 0 {
                    *even
                } else {
                    *odd
                }
            }
            SeqGen::OnePlusPower { coef, alpha } => 1.0 + coef * k.powf(*alpha),
            SeqGen::List { values } => values[(n + window as i64) as usize],
        }
    }

    pub fn materialize(&self, window: usize) -> Result<Vec<f64>> {
        if let SeqGen::List { values } = self {
            if values.len() != 2 * window + 1 {
                return Err(MeasureError::Shape(format!(
                    "list has {} values, window ±{window} needs {}",
                    values.len(),
                    2 * window + 1
                )));
            }
        }
        let w = window as i64;
        Ok((-w..=w).map(|n| self.value(n, window)).collect())
    }
}
