use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::window::BusemannWindow;
use crate::error::{Error, Result};
use crate::lattice::{GeodesicPath, LatticePoint, LatticeRect, Step};

/// Semi-infinite geodesic from `start`, followed until its first point
/// outside the window (that point is included).
pub fn semi_infinite_geodesic(busemann: &BusemannWindow, start: LatticePoint) -> Result<GeodesicPath> {
    let window = busemann.window();
    if !window.contains(start) {
        return Err(Error::contract("busemann", format!("start {start} outside {window}")));
    }
    let mut path = GeodesicPath::new(start);
    let mut z = start;
    while window.contains(z) {
        let step = busemann.primal_step(z);
        path.steps.push(step);
        z = z.step(step);
    }
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalescenceResult {
    /// First common vertex, `None` if the paths leave the window unmerged.
    pub point: Option<LatticePoint>,
    /// Whether `point` exists and lies in the query rectangle.
    pub inside: bool,
}

/// First common vertex of the semi-infinite geodesics from `x` and `y`.
///
/// Both walks advance one antidiagonal level at a time; since the step rule
/// is a function of the current vertex, two paths that share a vertex share
/// everything after it.
pub fn coalescence_point(
    busemann: &BusemannWindow,
    x: LatticePoint,
    y: LatticePoint,
    query: LatticeRect,
) -> Result<CoalescenceResult> {
    let window = busemann.window();
    for p in [x, y] {
        if !window.contains(p) {
            return Err(Error::contract("busemann", format!("start {p} outside {window}")));
        }
    }
    let level = |p: LatticePoint| p.x1 + p.x2;
    let (mut a, mut b) = (x, y);
    let point = loop {
        if a == b {
            break Some(a);
        }
        if level(a) <= level(b) {
            if !window.contains(a) {
                break None;
            }
            a = a.step(busemann.primal_step(a));
        } else {
            if !window.contains(b) {
                break None;
            }
            b = b.step(busemann.primal_step(b));
        }
    };
    Ok(CoalescenceResult {
        point,
        inside: point.is_some_and(|p| query.contains(p)),
    })
}

/// Dual weights on the shifted domain of a window.
#[derive(Debug, Clone)]
pub struct DualField {
    rect: LatticeRect,
    values: Vec<f64>,
}

impl DualField {
    /// Shifted coordinates: `p` carries the weight of dual vertex `p - (1/2, 1/2)`.
    pub fn rect(&self) -> LatticeRect {
        self.rect
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, p: LatticePoint) -> f64 {
        self.values[self.rect.index(p)]
    }
}

pub fn dual_field(busemann: &BusemannWindow) -> DualField {
    let rect = busemann.dual_rect();
    let values = rect.points().map(|p| busemann.dual_weight(p)).collect();
    DualField { rect, values }
}

/// South-west dual geodesic from shifted point `start`, followed until its
/// first point outside the dual domain (included).
pub fn dual_geodesic(busemann: &BusemannWindow, start: LatticePoint) -> Result<GeodesicPath> {
    let domain = busemann.dual_rect();
    if !domain.contains(start) {
        return Err(Error::contract("busemann", format!("dual start {start} outside {domain}")));
    }
    let mut path = GeodesicPath::new(start);
    let mut p = start;
    while domain.contains(p) {
        let step = busemann.dual_step(p);
        path.steps.push(step);
        p = p.step(step);
    }
    Ok(path)
}

/// Window vertices where the primal step is `e1` but the dual step at the
/// diagonal neighbour `x + (1,1)` is not `-e1`, or the reverse.
pub fn non_crossing_violations(busemann: &BusemannWindow) -> usize {
    busemann
        .window()
        .points()
        .filter(|&x| {
            let primal_e1 = busemann.primal_step(x) == Step::E1;
            let dual_w = busemann.dual_step(x + LatticePoint::new(1, 1)) == Step::NegE1;
            primal_e1 != dual_w
        })
        .count()
}

/// Whether a primal path (steps `e1`, `e2`) and a dual path in shifted
/// coordinates (steps `-e1`, `-e2`) cross. The dual edge out of `p` along
/// `-e2` crosses the primal edge `p - (1,1) -> p - (0,1)`, and along `-e1`
/// crosses `p - (1,1) -> p - (1,0)`.
pub fn paths_cross(primal: &GeodesicPath, dual: &GeodesicPath) -> bool {
    let primal_edges: HashSet<(LatticePoint, Step)> = primal
        .points()
        .zip(&primal.steps)
        .map(|(x, &s)| (x, s))
        .collect();
    dual.points().zip(&dual.steps).any(|(p, &s)| {
        let x = p - LatticePoint::new(1, 1);
        match s {
            Step::NegE2 => primal_edges.contains(&(x, Step::E1)),
            Step::NegE1 => primal_edges.contains(&(x, Step::E2)),
            _ => false,
        }
    })
}
