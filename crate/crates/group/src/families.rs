use gaussrep_linalg::DenseMatrix;

use crate::orth::{is_orthogonal, orthogonal_from_rankone};
use crate::{Family, GroupElement, GroupError, Result};

/// Hard cap on the dimension of constructed elements.
pub const MAX_DIM: usize = 4;

fn invalid(family: &'static str, reason: impl Into<String>) -> GroupError {
    GroupError::InvalidParams { family, reason: reason.into() }
}

fn check_index(family: &'static str, m: usize, i: usize) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(GroupError::TooLarge { m, cap: MAX_DIM });
    }
    if i == 0 || i > m {
        return Err(invalid(family, format!("index {i} outside 1..={m}")));
    }
    Ok(())
}

fn finite(family: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(invalid(family, "non-finite parameter"))
    }
}

fn from_rows(rows: Vec<Vec<f64>>, family: Family) -> Result<GroupElement> {
    GroupElement::new(DenseMatrix::from_rows(&rows)?, family)
}

fn identity_rows(m: usize) -> Vec<Vec<f64>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn flip_column(rows: &mut [Vec<f64>], r: usize) {
    for row in rows.iter_mut() {
        row[r - 1] = -row[r - 1];
    }
}

pub fn elementary(m: usize, k: usize, n: usize, t: f64) -> Result<GroupElement> {
    check_index("elementary", m, k)?;
    check_index("elementary", m, n)?;
    finite("elementary", &[t])?;
    if k == n {
        return Err(invalid("elementary", "k and n must differ"));
    }
    let mut rows = identity_rows(m);
    rows[k - 1][n - 1] = t;
    from_rows(rows, Family::Elementary { m, k, n, t })
}

fn two_param_rows(r: usize, t: f64, s: f64) -> Vec<Vec<f64>> {
    let mut rows = identity_rows(3);
    match r {
        1 => {
            rows[0][1] = t;
            rows[0][2] = s;
        }
        2 => {
            rows[1][0] = t;
            rows[1][2] = s;
        }
        _ => {
            rows[2][0] = t;
            rows[2][1] = s;
        }
    }
    rows
}

/// e_r(t,s) for m=3: the identity with row r's two off-diagonal entries set to (t,s) in column order.
pub fn two_param(r: usize, t: f64, s: f64) -> Result<GroupElement> {
    check_index("two_param", 3, r)?;
    finite("two_param", &[t, s])?;
    from_rows(two_param_rows(r, t, s), Family::TwoParam { r, t, s })
}

pub fn reflected(r: usize, t: f64, s: f64) -> Result<GroupElement> {
    check_index("reflected", 3, r)?;
    finite("reflected", &[t, s])?;
    let mut rows = two_param_rows(r, t, s);
    flip_column(&mut rows, r);
    from_rows(rows, Family::Reflected { r, t, s })
}

pub fn reflection(m: usize, r: usize) -> Result<GroupElement> {
    check_index("reflection", m, r)?;
    let mut rows = identity_rows(m);
    rows[r - 1][r - 1] = -1.0;
    from_rows(rows, Family::Reflection { m, r })
}

/// D(s)·orth·D(s)⁻¹·P_r for orth ∈ O(3) and positive s.
pub fn tau_r(r: usize, orth: &[Vec<f64>], s: &[f64]) -> Result<GroupElement> {
    check_index("tau_r", 3, r)?;
    if s.len() != 3 || s.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(invalid("tau_r", "s must be three positive reals"));
    }
    let o = DenseMatrix::from_rows(orth)?;
    if o.nrows() != 3 || o.ncols() != 3 {
        return Err(invalid("tau_r", "orth must be 3x3"));
    }
    if !is_orthogonal(&o, 1e-10) {
        return Err(invalid("tau_r", "orth is not orthogonal"));
    }
    let mut rows: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| s[i] * o.get(i, j) / s[j]).collect()).collect();
    flip_column(&mut rows, r);
    from_rows(rows, Family::TauR { r, orth: orth.to_vec(), s: s.to_vec() })
}

fn check_phi_s(family: &'static str, phi: f64, s: f64) -> Result<()> {
    finite(family, &[phi, s])?;
    if s <= 0.0 {
        return Err(invalid(family, "s must be positive"));
    }
    Ok(())
}

/// [[cos φ, s² sin φ], [s⁻² sin φ, −cos φ]]
pub fn tau_minus(phi: f64, s: f64) -> Result<GroupElement> {
    check_phi_s("tau_minus", phi, s)?;
    let (sn, cs) = phi.sin_cos();
    from_rows(vec![vec![cs, s * s * sn], vec![sn / (s * s), -cs]], Family::TauMinus { phi, s })
}

/// [[cos φ, −s² sin φ], [s⁻² sin φ, cos φ]]
pub fn tau(phi: f64, s: f64) -> Result<GroupElement> {
    check_phi_s("tau", phi, s)?;
    let (sn, cs) = phi.sin_cos();
    from_rows(vec![vec![cs, -s * s * sn], vec![sn / (s * s), cs]], Family::Tau { phi, s })
}

pub fn generic(matrix: DenseMatrix) -> Result<GroupElement> {
    GroupElement::new(matrix, Family::Generic)
}

pub fn make_family(family: &Family) -> Result<GroupElement> {
    match family {
        Family::Elementary { m, k, n, t } => elementary(*m, *k, *n, *t),
        Family::TwoParam { r, t, s } => two_param(*r, *t, *s),
        Family::Reflected { r, t, s } => reflected(*r, *t, *s),
        Family::Reflection { m, r } => reflection(*m, *r),
        Family::TauR { r, orth, s } => tau_r(*r, orth, s),
        Family::TauMinus { phi, s } => tau_minus(*phi, *s),
        Family::Tau { phi, s } => tau(*phi, *s),
        Family::RankOne { c, s, .. } => orthogonal_from_rankone(c, s).map(|r| r.element),
        Family::Generic => Err(invalid("generic", "a generic element needs its matrix")),
    }
}
