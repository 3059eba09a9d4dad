//! Finite-horizon Busemann functions, the semi-infinite and dual geodesics
//! they drive, and the exact duality checks.

mod checks;
mod geodesics;
mod window;

pub use checks::{
    additivity_violations, check_busemann_consistency, check_dual_restriction,
    busemann_ne_process, busemann_sw_process, check_duality_events, stabilization_fraction,
    DualityOutcome,
};
pub use geodesics::{
    coalescence_point, dual_field, dual_geodesic, non_crossing_violations, paths_cross,
    semi_infinite_geodesic, CoalescenceResult, DualField,
};
pub use window::{busemann_window, BusemannWindow, DEFAULT_FAR_MULTIPLIER};
