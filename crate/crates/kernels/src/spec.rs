use serde::{Deserialize, Serialize};

use crate::{KernelError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelKind {
    #[serde(rename = "D_by_A")]
    DByA,
    #[serde(rename = "XX_by_AA")]
    XxByAa,
    #[serde(rename = "X_by_DA")]
    XByDa,
    #[serde(rename = "D_by_XA")]
    DByXa,
    #[serde(rename = "X_by_shiftedXA")]
    XByShiftedXa,
    #[serde(rename = "D_by_expA")]
    DByExpA,
    #[serde(rename = "D_by_sinA")]
    DBySinA,
    #[serde(rename = "D_by_cosA")]
    DByCosA,
    #[serde(rename = "XXplusXX")]
    XxPlusXx,
    #[serde(rename = "X_from_pairs")]
    XFromPairs,
}

impl KernelKind {
    pub const ALL: [KernelKind; 10] = [
        KernelKind::DByA,
        KernelKind::XxByAa,
        KernelKind::XByDa,
        KernelKind::DByXa,
        KernelKind::XByShiftedXa,
        KernelKind::DByExpA,
        KernelKind::DBySinA,
        KernelKind::DByCosA,
        KernelKind::XxPlusXx,
        KernelKind::XFromPairs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::DByA => "D_by_A",
            KernelKind::XxByAa => "XX_by_AA",
            KernelKind::XByDa => "X_by_DA",
            KernelKind::DByXa => "D_by_XA",
            KernelKind::XByShiftedXa => "X_by_shiftedXA",
            KernelKind::DByExpA => "D_by_expA",
            KernelKind::DBySinA => "D_by_sinA",
            KernelKind::DByCosA => "D_by_cosA",
            KernelKind::XxPlusXx => "XXplusXX",
            KernelKind::XFromPairs => "X_from_pairs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn needs_partner(self) -> bool {
        matches!(self, KernelKind::XxByAa | KernelKind::XxPlusXx)
    }

    pub fn needs_phase(self) -> bool {
        matches!(self, KernelKind::DByExpA | KernelKind::DBySinA | KernelKind::DByCosA)
    }
}

/// Phase sequence s_k for the exp/sin/cos kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phase {
    #[default]
    Zero,
    Constant { value: f64 },
    /// s_k = ratio·√b_{rk}
    Matched { ratio: f64 },
    /// Values for k = −N..N over the spec window.
    List { values: Vec<f64> },
}

impl Phase {
    pub fn at(&self, b: f64, k: i64, window: usize) -> f64 {
        match self {
            Phase::Zero => 0.0,
            Phase::Constant { value } => *value,
            Phase::Matched { ratio } => ratio * b.sqrt(),
            Phase::List { values } => values[(k + window as i64) as usize],
        }
    }
}

/// One kernel evaluation: approximate a target built from row `row` at index
/// `target` (and `partner` for pair targets) using generators indexed by
/// k ∈ [−truncation, truncation] minus the target indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub row: usize,
    pub target: i64,
    #[serde(default)]
    pub partner: Option<i64>,
    pub truncation: usize,
    #[serde(default)]
    pub phase: Phase,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, row: usize, target: i64, truncation: usize) -> Self {
        KernelSpec { kind, row, target, partner: None, truncation, phase: Phase::Zero }
    }

    pub fn with_partner(mut self, partner: i64) -> Self {
        self.partner = Some(partner);
        self
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(KernelError::InvalidParams(msg));
        if self.truncation == 0 {
            return bad("truncation must be at least 1".into());
        }
        if !(1..=3).contains(&self.row) {
            return bad(format!("row {} outside 1..3", self.row));
        }
        match self.kind {
            KernelKind::XFromPairs if self.row == 1 => return bad("X_from_pairs targets row 2 or 3".into()),
            KernelKind::XxPlusXx if self.row != 1 => {
                return bad("XXplusXX pairs rows 2 and 3; row must name the omitted row 1".into())
            }
            _ => {}
        }
        if self.kind.needs_partner() {
            match self.partner {
                None => return bad(format!("{} needs a partner index", self.kind.name())),
                Some(t) if t == self.target => return bad("partner must differ from target".into()),
                _ => {}
            }
        }
        if let Phase::List { values } = &self.phase {
            if values.iter().any(|v| !v.is_finite()) {
                return bad("phase values must be finite".into());
            }
        }
        Ok(())
    }
}
