use std::fmt;

use serde::{Deserialize, Serialize};

use super::process::StationaryLpp;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeRect};

/// Signed exit index: `k > 0` when the geodesic leaves the boundary at
/// `base + k e1`, `-l < 0` when it leaves at `base + l e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExitIndex(i64);

impl ExitIndex {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 {
            Err(Error::contract("stationary", "exit index is never 0"))
        } else {
            Ok(ExitIndex(value))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> i64 {
        self.0.abs()
    }
}

impl fmt::Display for ExitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Axis points carry their own signed coordinate; `None` off the axes.
fn axis_label(base: LatticePoint, z: LatticePoint) -> Option<i64> {
    let d = z - base;
    match (d.x1, d.x2) {
        (k, 0) => Some(k),
        (0, l) => Some(-l),
        _ => None,
    }
}

/// Exit index of the geodesic from the base to `endpoint`, found by walking
/// predecessors back to the first axis vertex. An endpoint on an axis
/// returns its own signed coordinate.
pub fn exit_time(process: &StationaryLpp, endpoint: LatticePoint) -> Result<ExitIndex> {
    let base = process.base();
    if !process.rect().contains(endpoint) || endpoint == base {
        return Err(Error::contract(
            "stationary",
            format!("exit time undefined at {endpoint} for base {base} in {}", process.rect()),
        ));
    }
    let table = process.table();
    let mut z = endpoint;
    loop {
        if let Some(label) = axis_label(base, z) {
            return ExitIndex::new(label);
        }
        z = table.predecessor(z).expect("interior points have predecessors");
    }
}

/// Exit labels for every point of a stationary window, from one pass that
/// copies each point's label from its maximizing predecessor.
#[derive(Debug, Clone)]
pub struct ExitLabels {
    rect: LatticeRect,
    base: LatticePoint,
    labels: Vec<i64>,
}

impl ExitLabels {
    pub fn rect(&self) -> LatticeRect {
        self.rect
    }

    /// `None` at the base and outside the window.
    pub fn get(&self, z: LatticePoint) -> Option<ExitIndex> {
        if !self.rect.contains(z) || z == self.base {
            return None;
        }
        Some(ExitIndex(self.labels[self.rect.index(z)]))
    }

    /// Raw signed label, 0 at the base.
    pub fn raw(&self, z: LatticePoint) -> i64 {
        self.labels[self.rect.index(z)]
    }

    /// Points of the north and east sides, counterclockwise from the
    /// lower-right corner to the upper-left one.
    pub fn north_east_boundary(&self) -> Vec<LatticePoint> {
        let (lo, hi) = (self.rect.lo(), self.rect.hi());
        let east = (lo.x2..=hi.x2).map(|x2| LatticePoint::new(hi.x1, x2));
        let north = (lo.x1..hi.x1).rev().map(|x1| LatticePoint::new(x1, hi.x2));
        east.chain(north).collect()
    }
}

pub fn exit_labels_all(process: &StationaryLpp) -> ExitLabels {
    let rect = process.rect();
    let base = process.base();
    let table = process.table();
    let width = rect.width();
    let mut labels = vec![0i64; rect.area()];
    for (i, label) in labels.iter_mut().enumerate().take(width).skip(1) {
        *label = i as i64;
    }
    for r in 1..rect.height() {
        labels[r * width] = -(r as i64);
        for c in 1..width {
            let idx = r * width + c;
            let west = table.values()[idx - 1];
            let south = table.values()[idx - width];
            labels[idx] = if west >= south { labels[idx - 1] } else { labels[idx - width] };
        }
    }
    ExitLabels { rect, base, labels }
}
