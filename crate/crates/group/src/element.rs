use gaussrep_linalg::{det, DenseMatrix};
use serde::{Deserialize, Serialize};

use crate::{families, GroupError, Result};

/// Generating parameters of a group element. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    /// I + t·E_kn
    Elementary { m: usize, k: usize, n: usize, t: f64 },
    /// e_r(t,s): row r (m=3) carries the two off-diagonal parameters.
    TwoParam { r: usize, t: f64, s: f64 },
    /// e_r(t,s)·P_r
    Reflected { r: usize, t: f64, s: f64 },
    /// P_r = diag with −1 at r
    Reflection { m: usize, r: usize },
    /// D(s)·orth·D(s)⁻¹·P_r for orth ∈ O(3)
    TauR { r: usize, orth: Vec<Vec<f64>>, s: Vec<f64> },
    /// m=2, det −1
    TauMinus { phi: f64, s: f64 },
    /// m=2 scaled rotation, det +1
    Tau { phi: f64, s: f64 },
    /// I − 2wwᵀ/|w|² with w_r = c_r s_r; lambda holds the row factors of D t D⁻¹ − I.
    RankOne { c: Vec<f64>, s: Vec<f64>, lambda: Vec<f64> },
    Generic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Elementary { .. } => "elementary",
            Family::TwoParam { .. } => "two_param",
            Family::Reflected { .. } => "reflected",
            Family::Reflection { .. } => "reflection",
            Family::TauR { .. } => "tau_r",
            Family::TauMinus { .. } => "tau_minus",
            Family::Tau { .. } => "tau",
            Family::RankOne { .. } => "rank_one",
            Family::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub(crate) matrix: DenseMatrix,
    pub(crate) family: Family,
}

impl GroupElement {
    /// Wraps a matrix after checking it is square and invertible.
    pub fn new(matrix: DenseMatrix, family: Family) -> Result<Self> {
        let m = matrix.require_square()?;
        if m > families::MAX_DIM {
            return Err(GroupError::TooLarge { m, cap: families::MAX_DIM });
        }
        let d = det(&matrix)?;
        let scale: f64 = (0..m).map(|i| (0..m).map(|j| matrix.get(i, j).powi(2)).sum::<f64>().sqrt()).product();
        if d.abs() <= 1e-14 * scale.max(1.0) {
            return Err(GroupError::Singular);
        }
        Ok(GroupElement { matrix, family })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn det(&self) -> f64 {
        det(&self.matrix).expect("square by construction")
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.matrix.max_abs_diff(&DenseMatrix::identity(self.dim())) <= tol
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let inv = self.matrix.as_nalgebra().clone().try_inverse().ok_or(GroupError::Singular)?;
        GroupElement::new(DenseMatrix::from_nalgebra(inv)?, Family::Generic)
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, String> {
        let w: Wire = serde_json::from_str(s).map_err(|e| e.to_string())?;
        w.build().map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(flatten)]
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<DenseMatrix>,
}

impl Wire {
    fn build(self) -> Result<GroupElement> {
        match (self.family, self.matrix) {
            (Family::Generic, Some(m)) => families::generic(m),
            (Family::Generic, None) => Err(GroupError::InvalidParams {
                family: "generic",
                reason: "missing matrix".into(),
            }),
            (f, _) => families::make_family(&f),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { family: self.family.clone(), matrix: Some(self.matrix.clone()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Wire::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
