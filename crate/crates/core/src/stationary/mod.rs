//! Increment-stationary last-passage processes with boundary weights, exit
//! times and the nested-process comparisons.

mod boundary;
mod exit;
mod nested;
mod process;

pub(crate) use boundary::check_rho;
pub use boundary::{
    characteristic_point, make_sw_boundary, BoundarySide, BoundarySpec, CharacteristicTarget,
};
pub use exit::{exit_labels_all, exit_time, ExitIndex, ExitLabels};
pub use nested::{
    check_exit_equivalence, check_nested_geodesic_agreement, down_right_increment_sample,
    nested_boundary_from_increments, staircase_path,
};
pub use process::{make_ne_process, stationary_forward, StationaryLpp};
