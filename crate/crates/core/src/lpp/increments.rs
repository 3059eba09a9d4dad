use serde::{Deserialize, Serialize};

use super::passage::{lpp_forward, Orientation, PassageTable};
use super::weights::WeightField;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeRect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// Increments of a forward table along one axis. The horizontal field lives
/// on the points with a left neighbour, the vertical one on points with a
/// lower neighbour.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementField {
    rect: LatticeRect,
    direction: Direction,
    values: Vec<f64>,
}

impl IncrementField {
    pub fn rect(&self) -> LatticeRect {
        self.rect
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: LatticePoint) -> f64 {
        self.values[self.rect.index(p)]
    }
}

/// `I(a) = G(a) - G(a - e1)` or `J(b) = G(b) - G(b - e2)`.
pub fn increments(table: &PassageTable, direction: Direction) -> Result<IncrementField> {
    if table.orientation() != Orientation::ForwardFromBase {
        return Err(Error::contract("lpp", "increments need a forward table"));
    }
    let (lo, hi) = (table.rect().lo(), table.rect().hi());
    let (offset, first) = match direction {
        Direction::Horizontal => (LatticePoint::new(1, 0), LatticePoint::new(lo.x1 + 1, lo.x2)),
        Direction::Vertical => (LatticePoint::new(0, 1), LatticePoint::new(lo.x1, lo.x2 + 1)),
    };
    let rect = LatticeRect::new(first, hi).map_err(|_| {
        Error::contract("lpp", format!("{} has no {direction:?} edges", table.rect()))
    })?;
    let values = rect
        .points()
        .map(|p| table.get(p) - table.get(p - offset))
        .collect();
    Ok(IncrementField {
        rect,
        direction,
        values,
    })
}

/// Checks the comparison inequalities for increments of forward tables
/// based at `x`, `x - e1` and `x - e2`, all computed from one field on a
/// common window `[[x, weights.hi]]`:
/// `I^{x-e1} <= I^x <= I^{x-e2}` and `J^{x-e2} <= J^x <= J^{x-e1}`.
/// Returns the number of violated inequalities.
///
/// `x - e1` and `x - e2` must both lie in the field, so `x` must be strictly
/// above and to the right of the field's lower-left corner.
pub fn check_increment_monotonicity(weights: &WeightField, x: LatticePoint) -> Result<usize> {
    let full = weights.rect();
    let west = LatticePoint::new(x.x1 - 1, x.x2);
    let south = LatticePoint::new(x.x1, x.x2 - 1);
    if !full.contains(west) || !full.contains(south) || !full.contains(x) {
        return Err(Error::contract("lpp", format!("{x} needs both predecessors in {full}")));
    }
    let table_from = |base: LatticePoint| -> Result<PassageTable> {
        lpp_forward(&weights.subfield(LatticeRect::new(base, full.hi())?)?, base)
    };
    let g = table_from(x)?;
    let gw = table_from(west)?;
    let gs = table_from(south)?;
    let mut violations = 0;
    let window = g.rect();
    for y in window.points() {
        if y.x1 > x.x1 {
            let l = y - LatticePoint::new(1, 0);
            let (i, iw, is) = (g.get(y) - g.get(l), gw.get(y) - gw.get(l), gs.get(y) - gs.get(l));
            violations += usize::from(!(iw <= i && i <= is));
        }
        if y.x2 > x.x2 {
            let d = y - LatticePoint::new(0, 1);
            let (j, jw, js) = (g.get(y) - g.get(d), gw.get(y) - gw.get(d), gs.get(y) - gs.get(d));
            violations += usize::from(!(js <= j && j <= jw));
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::generate_bulk;
    use crate::random::make_stream;

    #[test]
    fn two_by_two_increment() {
        let f = WeightField::from_rows(LatticePoint::ORIGIN, &[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let g = lpp_forward(&f, LatticePoint::ORIGIN).unwrap();
        let i = increments(&g, Direction::Horizontal).unwrap();
        assert_eq!(i.get(LatticePoint::new(1, 1)), 4.0);
        let j = increments(&g, Direction::Vertical).unwrap();
        assert_eq!(j.get(LatticePoint::new(0, 1)), 3.0);
    }

    #[test]
    fn increments_positive() {
        let rect = LatticeRect::from_origin(LatticePoint::new(30, 20)).unwrap();
        let f = generate_bulk(rect, &mut make_stream(2, 0)).unwrap();
        let g = lpp_forward(&f, rect.lo()).unwrap();
        for d in [Direction::Horizontal, Direction::Vertical] {
            assert!(increments(&g, d).unwrap().values().iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn comparison_holds_on_dyadic_fields() {
        for k in 0..50 {
            let rect = LatticeRect::from_origin(LatticePoint::new(15, 15)).unwrap();
            let mut f = generate_bulk(rect, &mut make_stream(4, k)).unwrap();
            f.snap_dyadic(30);
            let x = LatticePoint::new(1 + (k % 4) as i64, 1 + (k % 3) as i64);
            assert_eq!(check_increment_monotonicity(&f, x).unwrap(), 0);
        }
    }
}
