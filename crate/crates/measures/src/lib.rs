//! Gaussian product measures on m×ℤ coordinates, Hellinger and Kakutani
//! tests, and the named orthogonality series evaluated on a finite window.

mod error;
mod examples;
mod factor;
mod kakutani;
mod report;
mod seq;
mod series;
mod spec;

pub use error::MeasureError;
pub use examples::{ex_011_11, ex_111_b1_alt, ex_111_b1_any, ex_a1, named_example, EXAMPLE_NAMES};
pub use factor::{hellinger_factor, hellinger_quadrature, GaussianFactor};
pub use kakutani::{
    block_matrix, centered_orthogonality, equivalence_series, hellinger_block,
    hellinger_block_expansion, hellinger_bracket, kakutani_orthogonality, kakutani_product,
    KakutaniReport,
};
pub use report::{Class, Classifier, SeriesReport, Source};
pub use seq::SeqGen;
pub use series::{
    mean_shift_equivalence, ratio_pair, s_k_general, s_r_series, sL_family, sL_series,
    sigma1_series, sigma2_series, sigma_ij_mean, sigma_ij_scale, zero_one_law, MeanMap,
    ScaleReport, Sigma1Form, Sigma1Report, Sign,
};
pub use spec::{MeasureSpec, RowGen, SpecFile};

pub type Result<T> = std::result::Result<T, MeasureError>;
