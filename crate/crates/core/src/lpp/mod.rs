//! Bulk weight fields and point-to-point last-passage percolation.

mod geodesic;
mod increments;
pub(crate) mod kernel;
mod oracle;
mod passage;
mod weights;

pub use geodesic::trace_geodesic;
pub use increments::{check_increment_monotonicity, increments, Direction, IncrementField};
pub use oracle::{brute_force_lpp, BRUTE_FORCE_MAX_LENGTH};
pub use passage::{lpp_backward, lpp_forward, Orientation, PassageTable};
pub use weights::{generate_bulk, generate_bulk_limited, WeightField, DEFAULT_MAX_CELLS};
pub(crate) use weights::{check_capacity, snap_dyadic};
