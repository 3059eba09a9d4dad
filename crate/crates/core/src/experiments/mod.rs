//! Monte Carlo estimators, scaling fits and lemma checks.
//!
//! Within one experiment every grid point is evaluated on the same
//! realization of each replica, so indicators that geometry forces to be
//! monotone can be checked realization by realization. Streams are
//! namespaced by experiment kind.

mod appendix;
mod coalescence;
mod config;
mod exit;
mod record;
pub(crate) mod runner;
mod suite;

pub use appendix::{
    bound_case, check_radon_nikodym, check_rw_bound, density_ratio_second_moment, BoundCase, DensityRatioReport,
    MomentRow, WalkBoundReport, WalkBoundRow,
};
pub use coalescence::{run_coal_corner, run_coal_fast, run_coal_slow, run_duality_check, run_fluctuation, DualityEstimate};
pub use config::{ExperimentConfig, ExperimentKind};
pub use exit::{check_variance_identity, check_variance_identity_at, run_exit_shifted, run_exit_small, run_exit_tail, VarianceReport};
pub use record::{fit_scaling, records_to_csv, CheckResult, EstimateRecord, RecordContext, ScalingFit, ScalingTransform, CSV_HEADER};
pub use runner::{GridEstimate, RunSettings};
pub use suite::{run_experiment, ExperimentOutput, NamedFit};
