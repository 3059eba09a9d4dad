//! Points, rectangles and nearest-neighbour paths on `Z^2`.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x1: i64,
    pub x2: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x1: 0, x2: 0 };

    pub const fn new(x1: i64, x2: i64) -> Self {
        LatticePoint { x1, x2 }
    }

    /// Coordinatewise order `self <= other`.
    pub fn le(&self, other: &LatticePoint) -> bool {
        self.x1 <= other.x1 && self.x2 <= other.x2
    }

    /// Strict coordinatewise order in both coordinates.
    pub fn lt_both(&self, other: &LatticePoint) -> bool {
        self.x1 < other.x1 && self.x2 < other.x2
    }

    pub fn l1(&self) -> i64 {
        self.x1.abs() + self.x2.abs()
    }

    pub fn step(self, step: Step) -> LatticePoint {
        let (d1, d2) = step.delta();
        LatticePoint::new(self.x1 + d1, self.x2 + d2)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

/// Closed lattice rectangle `[[lo, hi]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeRect {
    lo: LatticePoint,
    hi: LatticePoint,
}

impl LatticeRect {
    pub fn new(lo: LatticePoint, hi: LatticePoint) -> Result<Self> {
        if !lo.le(&hi) {
            return Err(Error::contract(
                "lattice",
                format!("rectangle corners out of order: lo {lo} hi {hi}"),
            ));
        }
        Ok(LatticeRect { lo, hi })
    }

    /// Rectangle `[[0, hi]]`.
    pub fn from_origin(hi: LatticePoint) -> Result<Self> {
        Self::new(LatticePoint::ORIGIN, hi)
    }

    pub fn lo(&self) -> LatticePoint {
        self.lo
    }

    pub fn hi(&self) -> LatticePoint {
        self.hi
    }

    pub fn width(&self) -> usize {
        (self.hi.x1 - self.lo.x1 + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.hi.x2 - self.lo.x2 + 1) as usize
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.lo.le(&p) && p.le(&self.hi)
    }

    pub fn contains_rect(&self, other: &LatticeRect) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    /// Row-major offset of `p` (rows run along `e1`, stacked along `e2`).
    #[inline]
    pub fn index(&self, p: LatticePoint) -> usize {
        debug_assert!(self.contains(p), "{p} outside {self}");
        (p.x2 - self.lo.x2) as usize * self.width() + (p.x1 - self.lo.x1) as usize
    }

    #[inline]
    pub fn point(&self, index: usize) -> LatticePoint {
        let w = self.width();
        LatticePoint::new(
            self.lo.x1 + (index % w) as i64,
            self.lo.x2 + (index / w) as i64,
        )
    }

    /// Points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (self.lo.x2..=self.hi.x2)
            .flat_map(move |x2| (self.lo.x1..=self.hi.x1).map(move |x1| LatticePoint::new(x1, x2)))
    }
}

impl fmt::Display for LatticeRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}]]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    E1,
    E2,
    NegE1,
    NegE2,
}

impl Step {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Step::E1 => (1, 0),
            Step::E2 => (0, 1),
            Step::NegE1 => (-1, 0),
            Step::NegE2 => (0, -1),
        }
    }

    pub fn is_up_right(self) -> bool {
        matches!(self, Step::E1 | Step::E2)
    }

    pub fn is_down_left(self) -> bool {
        matches!(self, Step::NegE1 | Step::NegE2)
    }
}

/// A lattice path given by its start and a sequence of unit steps.
///
/// Primal geodesics use `{E1, E2}`, dual (south-west) geodesics use
/// `{NegE1, NegE2}`, down-right paths use `{E1, NegE2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub start: LatticePoint,
    pub steps: Vec<Step>,
}

impl GeodesicPath {
    pub fn new(start: LatticePoint) -> Self {
        GeodesicPath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let mut cur = self.start;
        std::iter::once(self.start).chain(self.steps.iter().map(move |&s| {
            cur = cur.step(s);
            cur
        }))
    }

    pub fn end(&self) -> LatticePoint {
        self.steps.iter().fold(self.start, |p, &s| p.step(s))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points().any(|q| q == p)
    }

    /// Consecutive point pairs.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let pts: Vec<_> = self.points().collect();
        pts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Builds a path from a point sequence; consecutive points must differ
    /// by a unit step.
    pub fn from_points(points: &[LatticePoint]) -> Result<Self> {
        let Some(&start) = points.first() else {
            return Err(Error::contract("lattice", "empty point sequence"));
        };
        let mut path = GeodesicPath::new(start);
        for w in points.windows(2) {
            let d = w[1] - w[0];
            let step = match (d.x1, d.x2) {
                (1, 0) => Step::E1,
                (0, 1) => Step::E2,
                (-1, 0) => Step::NegE1,
                (0, -1) => Step::NegE2,
                _ => {
                    return Err(Error::contract(
                        "lattice",
                        format!("{} -> {} is not a unit step", w[0], w[1]),
                    ))
                }
            };
            path.steps.push(step);
        }
        Ok(path)
    }
}

/// `floor(x)`, except that values within a relative `1e-9` of an integer
/// snap to that integer. Parameters such as `rho = 0.3` or `N^{2/3}` are
/// meant as exact reals; their binary rounding must not move a floor.
pub fn robust_floor(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// `N^{2/3}`.
pub fn scale_two_thirds(n: u64) -> f64 {
    let c = (n as f64).cbrt();
    c * c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_index_round_trips() {
        let r = LatticeRect::new(LatticePoint::new(-2, 3), LatticePoint::new(4, 7)).unwrap();
        assert_eq!(r.width(), 7);
        assert_eq!(r.height(), 5);
        for (k, p) in r.points().enumerate() {
            assert_eq!(r.index(p), k);
            assert_eq!(r.point(k), p);
        }
    }

    #[test]
    fn rect_rejects_reversed_corners() {
        assert!(LatticeRect::new(LatticePoint::new(1, 0), LatticePoint::new(0, 5)).is_err());
    }

    #[test]
    fn path_from_points_and_back() {
        let pts = [
            LatticePoint::new(0, 0),
            LatticePoint::new(0, 1),
            LatticePoint::new(1, 1),
        ];
        let path = GeodesicPath::from_points(&pts).unwrap();
        assert_eq!(path.steps, vec![Step::E2, Step::E1]);
        assert_eq!(path.points().collect::<Vec<_>>(), pts);
        assert_eq!(path.end(), LatticePoint::new(1, 1));
        assert!(GeodesicPath::from_points(&[pts[0], pts[2]]).is_err());
    }

    #[test]
    fn robust_floor_snaps_decimal_products() {
        assert_eq!(robust_floor(0.7f64 * 0.7 * 1000.0), 490);
        assert_eq!(robust_floor(0.3f64 * 0.3 * 1000.0), 90);
        assert_eq!(robust_floor(0.4 * scale_two_thirds(1000)), 40);
        assert_eq!(robust_floor(2.5), 2);
        assert_eq!(robust_floor(-0.5), -1);
    }
}
