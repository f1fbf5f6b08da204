mod constants;
mod errors;
mod report;
mod splitting;

pub use constants::{
    check_estfund, check_matrix_lemma, check_strengthened_cs, cs_ratio, dense_condition, matrix_lemma_holds,
    measure_norm_equivalence_strip, reference_mass, CsReport, RatioInterval, StripRatios,
};
pub use errors::{compute_errors, interpolate, ErrorNorms};
pub use report::{constant_report, ConstantReport, ReportOptions};
pub use splitting::{estimate_splitting_constant, estimate_splitting_constant_with, SplittingConstant, DENSE_LIMIT};
