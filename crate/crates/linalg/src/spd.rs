use crate::{principal_minor, DenseMatrix, LinalgError, Result, SubsetIndex};

const PIVOT_REL: f64 = 1e-12;

/// Symmetric and Cholesky-factorizable with every pivot above 1e-12 of the largest diagonal entry.
pub fn is_spd(c: &DenseMatrix) -> bool {
    if !c.is_square() {
        return false;
    }
    let n = c.nrows();
    let max_abs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c.get(i, j).abs()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..i {
            if (c.get(i, j) - c.get(j, i)).abs() > 1e-12 * max_abs {
                return false;
            }
        }
    }
    let max_diag = (0..n).map(|i| c.get(i, i)).fold(f64::NEG_INFINITY, f64::max);
    if max_diag <= 0.0 {
        return false;
    }
    let threshold = PIVOT_REL * max_diag;
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let pivot = c.get(j, j) - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if pivot <= threshold {
            return false;
        }
        let d = pivot.sqrt();
        l[j][j] = d;
        for i in j + 1..n {
            let s = c.get(i, j) - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = s / d;
        }
    }
    true
}

/// M(α)M(β) − M(α∪β)M(α∩β) for an SPD matrix; nonnegative up to rounding.
pub fn hadamard_fischer_gap(c: &DenseMatrix, alpha: &SubsetIndex, beta: &SubsetIndex) -> Result<f64> {
    let n = c.require_square()?;
    alpha.check_within(n)?;
    beta.check_within(n)?;
    if !is_spd(c) {
        return Err(LinalgError::NotSpd);
    }
    let m = |s: &SubsetIndex| principal_minor(c, s);
    Ok(m(alpha)? * m(beta)? - m(&alpha.union(beta))? * m(&alpha.intersection(beta))?)
}
