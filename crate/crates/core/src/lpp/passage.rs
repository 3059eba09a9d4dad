use serde::{Deserialize, Serialize};

use super::kernel::forward_dp;
use super::weights::WeightField;
use crate::error::{Error, Result};
use crate::lattice::{GeodesicPath, LatticePoint, LatticeRect, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `values[x] = G(anchor, x)`, anchor at the lower-left corner.
    ForwardFromBase,
    /// `values[z] = G(z, anchor)`, anchor at the upper-right corner.
    BackwardToTarget,
}

/// Last-passage values over a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageTable {
    rect: LatticeRect,
    anchor: LatticePoint,
    orientation: Orientation,
    values: Vec<f64>,
}

impl PassageTable {
    /// Forward table over an arbitrary (not necessarily positive) weight
    /// array; the anchor is `rect.lo`.
    pub(crate) fn forward_from_raw(rect: LatticeRect, weights: &[f64]) -> Self {
        let mut values = vec![0.0; weights.len()];
        forward_dp(rect.width(), weights, &mut values);
        PassageTable {
            rect,
            anchor: rect.lo(),
            orientation: Orientation::ForwardFromBase,
            values,
        }
    }

    /// Backward table via the forward kernel on the 180-degree reflection.
    pub(crate) fn backward_from_raw(rect: LatticeRect, weights: &[f64]) -> Self {
        let mut reflected = weights.to_vec();
        reflected.reverse();
        let mut values = vec![0.0; weights.len()];
        forward_dp(rect.width(), &reflected, &mut values);
        values.reverse();
        PassageTable {
            rect,
            anchor: rect.hi(),
            orientation: Orientation::BackwardToTarget,
            values,
        }
    }

    pub(crate) fn with_values(
        rect: LatticeRect,
        anchor: LatticePoint,
        orientation: Orientation,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(values.len(), rect.area());
        PassageTable {
            rect,
            anchor,
            orientation,
            values,
        }
    }

    pub fn rect(&self) -> LatticeRect {
        self.rect
    }

    pub fn anchor(&self) -> LatticePoint {
        self.anchor
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, p: LatticePoint) -> f64 {
        self.values[self.rect.index(p)]
    }

    pub fn try_get(&self, p: LatticePoint) -> Option<f64> {
        self.rect.contains(p).then(|| self.get(p))
    }

    /// For a forward table, the predecessor the maximizing path enters `z`
    /// from: the larger of `G(z - e1)`, `G(z - e2)`, with `z - e1` on ties.
    /// `None` at the anchor.
    pub fn predecessor(&self, z: LatticePoint) -> Option<LatticePoint> {
        debug_assert_eq!(self.orientation, Orientation::ForwardFromBase);
        let lo = self.rect.lo();
        let west = LatticePoint::new(z.x1 - 1, z.x2);
        let south = LatticePoint::new(z.x1, z.x2 - 1);
        match (z.x1 > lo.x1, z.x2 > lo.x2) {
            (false, false) => None,
            (true, false) => Some(west),
            (false, true) => Some(south),
            (true, true) => Some(if self.get(west) >= self.get(south) { west } else { south }),
        }
    }

    /// Maximizing path from the anchor of a forward table to `end`,
    /// recovered by walking predecessors back from `end`.
    pub fn backtrack(&self, end: LatticePoint) -> Result<GeodesicPath> {
        if self.orientation != Orientation::ForwardFromBase {
            return Err(Error::contract("lpp", "backtrack needs a forward table"));
        }
        if !self.rect.contains(end) {
            return Err(Error::contract("lpp", format!("{end} outside {}", self.rect)));
        }
        let mut reversed = vec![end];
        let mut z = end;
        while let Some(p) = self.predecessor(z) {
            reversed.push(p);
            z = p;
        }
        reversed.reverse();
        GeodesicPath::from_points(&reversed)
    }

    /// Backward tables only: the step the maximizing path takes out of `z`
    /// (argmax of `G(z + e1)`, `G(z + e2)`, `e1` on ties). `None` at the anchor.
    pub fn successor_step(&self, z: LatticePoint) -> Option<Step> {
        debug_assert_eq!(self.orientation, Orientation::BackwardToTarget);
        let hi = self.rect.hi();
        match (z.x1 < hi.x1, z.x2 < hi.x2) {
            (false, false) => None,
            (true, false) => Some(Step::E1),
            (false, true) => Some(Step::E2),
            (true, true) => {
                let east = self.get(LatticePoint::new(z.x1 + 1, z.x2));
                let north = self.get(LatticePoint::new(z.x1, z.x2 + 1));
                Some(if east >= north { Step::E1 } else { Step::E2 })
            }
        }
    }
}

/// `G(base, x)` for every `x` in the field's rectangle; `base` must be the
/// lower-left corner.
pub fn lpp_forward(weights: &WeightField, base: LatticePoint) -> Result<PassageTable> {
    if base != weights.rect().lo() {
        return Err(Error::contract(
            "lpp",
            format!("forward base {base} is not the field corner {}", weights.rect().lo()),
        ));
    }
    Ok(PassageTable::forward_from_raw(weights.rect(), weights.values()))
}

/// `G(z, target)` for every `z`; `target` must be the upper-right corner.
pub fn lpp_backward(weights: &WeightField, target: LatticePoint) -> Result<PassageTable> {
    if target != weights.rect().hi() {
        return Err(Error::contract(
            "lpp",
            format!("backward target {target} is not the field corner {}", weights.rect().hi()),
        ));
    }
    Ok(PassageTable::backward_from_raw(weights.rect(), weights.values()))
}
