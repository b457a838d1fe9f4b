//! Matrix families used as translations of Gaussian product measures:
//! elementary and two-parameter unipotents, coordinate reflections, scaled
//! orthogonal matrices and the rank-one reflections built from a coefficient vector.

mod element;
mod error;
mod families;
mod orth;

pub use element::{Family, GroupElement};
pub use error::GroupError;
pub use families::{
    elementary, generic, make_family, reflected, reflection, tau, tau_minus, tau_r, two_param,
    MAX_DIM,
};
pub use orth::{
    involution_check, is_involution, is_orthogonal, orthogonal_cofactor_identity, orthogonal_from_rankone,
    orthogonality_defect, random_orthogonal, RankOne,
};

pub type Result<T> = std::result::Result<T, GroupError>;
