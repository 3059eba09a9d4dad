use super::passage::{Orientation, PassageTable};
use crate::error::{Error, Result};
use crate::lattice::{GeodesicPath, LatticePoint};

/// Geodesic from `start` to the anchor of a backward table. From `z` the
/// path moves to whichever of `z + e1`, `z + e2` has the larger remaining
/// passage value, taking `e1` on an exact tie.
pub fn trace_geodesic(table: &PassageTable, start: LatticePoint) -> Result<GeodesicPath> {
    if table.orientation() != Orientation::BackwardToTarget {
        return Err(Error::contract("lpp", "trace_geodesic needs a backward table"));
    }
    if !table.rect().contains(start) {
        return Err(Error::contract(
            "lpp",
            format!("start {start} outside {}", table.rect()),
        ));
    }
    let mut path = GeodesicPath::new(start);
    let mut z = start;
    while let Some(step) = table.successor_step(z) {
        path.steps.push(step);
        z = z.step(step);
    }
    Ok(path)
}
