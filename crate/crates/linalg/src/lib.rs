//! Dense small-matrix machinery: minors and cofactors, Gram determinants,
//! the Δ functional, shifted inverse quadratic forms and constrained minima.

mod error;
mod gram;
mod matrix;
mod minors;
pub mod par;
mod quad;
mod spd;
mod subset;
mod tol;

pub use error::LinalgError;
pub use gram::{
    delta_from_gram, delta_functional, delta_functional_ratio, det_i_plus_xtx_expansion, gram_determinant,
    gram_matrix, gram_system_quadform, hyperplane_distance, squared_maximal_minors, GramSystem,
};
pub use matrix::DenseMatrix;
pub use minors::{
    char_poly_terms, cofactor, cofactor_matrix, det, generalized_char_poly, minor,
    principal_minor, shifted_inverse_quadform, COFACTOR_SUM_CAP,
};
pub use quad::{min_quadratic_diagonal, min_quadratic_on_hyperplane, MinQuad, FEASIBILITY_EPS};
pub use spd::{hadamard_fischer_gap, is_spd};
pub use subset::{subsets, subsets_of_size, SubsetIndex};
pub use tol::{approx_eq, rel_diff, Tol};

pub type Result<T> = std::result::Result<T, LinalgError>;
