//! Case classification of three-row Gaussian product measures, approximation
//! criteria for the generator triplets, and the resulting irreducibility evidence.

mod approx;
mod classify;
mod criteria;
mod error;
mod pattern;
mod probe;
mod report;
mod sweep;

pub use approx::{approximable_triplets, ApproxVerdict, CriterionEntry, CriterionStatus, Operator, Verdict, Witness};
pub use classify::{classify_case, classify_case_with, BranchStep, CaseClassification, ClassifyConfig, ScaleScan, YPattern};
pub use criteria::{family_report, kernel_report, window_report};
pub use error::DecisionError;
pub use pattern::{pattern_string, tail_limit, Bit, Limit, LimitReport, Triple};
pub use probe::{default_grid, l2_combination_probe, Combination, ProbeReport};
pub use report::{audit, minimal_elements, AuditReport};
pub use sweep::{orthogonality_sweep, sweep_element, ElementSummary, SweepEntry};

pub type Result<T> = std::result::Result<T, DecisionError>;
