//! Finite-window estimators of approximation exponents and the
//! verification harness.

mod classify;
mod estimate;
mod frobenius;
mod identities;
mod inequalities;
mod lambda;
mod liouville;
mod power_table;
mod reductions;
mod report;
mod window;

pub use power_table::{Eval, PowerTable};
pub use window::{canonical_index, enum_xpolys, xpoly_at, EnumerationWindow, Filter, DEFAULT_ENUM_BUDGET};
pub use estimate::{estimate_what, estimate_wn, estimate_wn_star, ExponentEstimate, Kind, Witness};
pub use lambda::{estimate_lambda, estimate_lambda_hat, min_frac_val};
pub use identities::{verify_identity_suite, IdentityCounts};
pub use report::VerificationReport;
pub use reductions::{pr_conditions, verify_reduction_suite, ReductionCounts};
pub use inequalities::{metric_median, random_split, verify_inequality_suite, window_inequality, CorpusEntry, InequalityCounts, SplitPoly};
pub use frobenius::{verify_frobenius_suite, FrobeniusCounts};
pub use liouville::liouville_check;
pub use classify::{classify_report, ClassReport, CLASS_DISCLAIMER};
