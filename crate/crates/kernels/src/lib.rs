//! Finite-truncation Gram systems for approximating operators on a Gaussian
//! product space by combinations of generators, with closed-form residual
//! minima and the matching Δ / Σ criteria.

mod build;
mod cases;
mod error;
mod families;
mod moments;
mod spec;
mod system;

pub use build::{roles, run_kernel};
pub use cases::{duality_cases, DualityCase};
pub use error::KernelError;
pub use families::{d_family, delta_trajectory, dx_family, run_batch, xx_family, DeltaTrajectory};
pub use moments::{
    char_fn, cos_i3, cos_variance, exp_variance, gaussian_expectation, gaussian_moment,
    min_exp_variance, moment_by_quadrature, second_moment, sin_i3, sin_variance, Complex, Moment,
};
pub use spec::{KernelKind, KernelSpec, Phase};
pub use system::{trajectory_points, KernelResult, TrajectoryPoint};

pub type Result<T> = std::result::Result<T, KernelError>;
