use super::boundary::{BoundarySide, BoundarySpec};
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeRect};
use crate::lpp::{Orientation, PassageTable, WeightField};

/// A south-west stationary process: its boundary and its forward table over
/// `[[base, base + (m, n)]]`.
#[derive(Debug, Clone)]
pub struct StationaryLpp {
    boundary: BoundarySpec,
    table: PassageTable,
}

impl StationaryLpp {
    pub fn boundary(&self) -> &BoundarySpec {
        &self.boundary
    }

    pub fn table(&self) -> &PassageTable {
        &self.table
    }

    pub fn base(&self) -> LatticePoint {
        self.boundary.base()
    }

    pub fn rect(&self) -> LatticeRect {
        self.table.rect()
    }

    pub fn get(&self, p: LatticePoint) -> f64 {
        self.table.get(p)
    }
}

/// Row-major field over `[[base, base + (m, n)]]`: 0 at the base, boundary
/// weights on the two axes, bulk weights elsewhere.
fn augmented(boundary: &BoundarySpec, bulk: &WeightField, base: LatticePoint) -> Result<(LatticeRect, Vec<f64>)> {
    let inner = bulk.rect();
    if inner.lo() != base + LatticePoint::new(1, 1) {
        return Err(Error::contract(
            "stationary",
            format!("bulk {inner} must start at base {base} + (1, 1)"),
        ));
    }
    let (m, n) = (inner.width(), inner.height());
    if boundary.horizontal().len() < m || boundary.vertical().len() < n {
        return Err(Error::contract(
            "stationary",
            format!(
                "boundary extents ({}, {}) do not cover a {m} x {n} bulk",
                boundary.horizontal().len(),
                boundary.vertical().len()
            ),
        ));
    }
    let rect = LatticeRect::new(base, inner.hi())?;
    let mut values = Vec::with_capacity(rect.area());
    values.push(0.0);
    values.extend_from_slice(&boundary.horizontal()[..m]);
    for (r, row) in bulk.values().chunks_exact(m).enumerate() {
        values.push(boundary.vertical()[r]);
        values.extend_from_slice(row);
    }
    Ok((rect, values))
}

/// `G^rho(base, .)` on `[[base, bulk.hi]]`.
pub fn stationary_forward(boundary: &BoundarySpec, bulk: &WeightField) -> Result<StationaryLpp> {
    if boundary.side() != BoundarySide::SouthWest {
        return Err(Error::contract("stationary", "stationary_forward needs a south-west boundary"));
    }
    let (rect, values) = augmented(boundary, bulk, boundary.base())?;
    Ok(StationaryLpp {
        boundary: boundary.clone(),
        table: PassageTable::forward_from_raw(rect, &values),
    })
}

/// `G^{NE,rho}(y, corner)` for every `y` in `[[bulk.lo, corner]]`, computed
/// as the south-west process of the field reflected through `corner`. The
/// result is a backward table anchored at `corner`.
pub fn make_ne_process(
    rho: f64,
    corner: LatticePoint,
    bulk: &WeightField,
    boundary: &BoundarySpec,
) -> Result<PassageTable> {
    if boundary.side() != BoundarySide::NorthEast || boundary.base() != corner {
        return Err(Error::contract(
            "stationary",
            format!("need a north-east boundary based at {corner}"),
        ));
    }
    if bulk.rect().hi() != corner - LatticePoint::new(1, 1) {
        return Err(Error::contract(
            "stationary",
            format!("bulk {} must end at corner {corner} - (1, 1)", bulk.rect()),
        ));
    }
    let mirrored = BoundarySpec::new(
        rho,
        LatticePoint::ORIGIN,
        BoundarySide::SouthWest,
        boundary.horizontal().to_vec(),
        boundary.vertical().to_vec(),
    )?;
    let sw = stationary_forward(&mirrored, &bulk.reflected(corner))?;
    let rect = LatticeRect::new(bulk.rect().lo(), corner)?;
    let mut values = sw.table.values().to_vec();
    values.reverse();
    Ok(PassageTable::with_values(rect, corner, Orientation::BackwardToTarget, values))
}
