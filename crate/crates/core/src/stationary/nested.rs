use super::boundary::{BoundarySide, BoundarySpec};
use super::exit::exit_time;
use super::process::{stationary_forward, StationaryLpp};
use crate::error::{Error, Result};
use crate::lattice::{GeodesicPath, LatticePoint, LatticeRect, Step};
use crate::lpp::{Direction, WeightField};

/// Boundary of the process nested at `z`: `I_k = G(z + k e1) - G(z + (k-1) e1)`
/// and `J_l = G(z + l e2) - G(z + (l-1) e2)` out to the window edge. At the
/// outer base this is the outer boundary itself.
pub fn nested_boundary_from_increments(outer: &StationaryLpp, z: LatticePoint) -> Result<BoundarySpec> {
    let rect = outer.rect();
    if z == outer.base() {
        return Ok(outer.boundary().clone());
    }
    if !rect.contains(z) || z.x1 >= rect.hi().x1 || z.x2 >= rect.hi().x2 {
        return Err(Error::contract(
            "stationary",
            format!("nested base {z} must lie in {rect} off its north and east sides"),
        ));
    }
    let table = outer.table();
    let horizontal = (z.x1 + 1..=rect.hi().x1)
        .map(|x1| table.get(LatticePoint::new(x1, z.x2)) - table.get(LatticePoint::new(x1 - 1, z.x2)))
        .collect();
    let vertical = (z.x2 + 1..=rect.hi().x2)
        .map(|x2| table.get(LatticePoint::new(z.x1, x2)) - table.get(LatticePoint::new(z.x1, x2 - 1)))
        .collect();
    BoundarySpec::new(outer.boundary().rho(), z, BoundarySide::SouthWest, horizontal, vertical)
}

fn nested_process(outer: &StationaryLpp, bulk: &WeightField, z: LatticePoint) -> Result<StationaryLpp> {
    let boundary = nested_boundary_from_increments(outer, z)?;
    let inner = LatticeRect::new(z + LatticePoint::new(1, 1), outer.rect().hi())?;
    stationary_forward(&boundary, &bulk.subfield(inner)?)
}

/// Geodesic points strictly north-east of `z`.
fn quadrant_part(process: &StationaryLpp, z: LatticePoint, y: LatticePoint) -> Result<Vec<LatticePoint>> {
    let path = process.table().backtrack(y)?;
    Ok(path.points().filter(|p| z.lt_both(p)).collect())
}

/// Whether the geodesic of the outer process to `y` and that of the process
/// nested at `z` agree inside `z + Z^2_{>0}`. `bulk` is the outer bulk field.
pub fn check_nested_geodesic_agreement(
    outer: &StationaryLpp,
    bulk: &WeightField,
    z: LatticePoint,
    y: LatticePoint,
) -> Result<bool> {
    if !outer.base().le(&z) || !z.lt_both(&y) || !outer.rect().contains(y) {
        return Err(Error::contract(
            "stationary",
            format!("need base {} <= {z} < {y} inside {}", outer.base(), outer.rect()),
        ));
    }
    let nested = nested_process(outer, bulk, z)?;
    Ok(quadrant_part(outer, z, y)? == quadrant_part(&nested, z, y)?)
}

/// With processes nested at `(0,0)` and `(m,-n)` inside `outer`, checks
/// `Z^{0->z} <= m` iff `Z^{(m,-n)->z} < -n`.
pub fn check_exit_equivalence(
    outer: &StationaryLpp,
    bulk: &WeightField,
    m: i64,
    n: i64,
    z: LatticePoint,
) -> Result<bool> {
    let a = LatticePoint::ORIGIN;
    let b = LatticePoint::new(m, -n);
    if m <= 0 || n <= 0 || !outer.base().le(&a) || !outer.base().le(&b) {
        return Err(Error::contract(
            "stationary",
            format!("need m, n > 0 and base {} below (0,0) and ({m},{})", outer.base(), -n),
        ));
    }
    if !a.lt_both(&z) || !b.lt_both(&z) || !outer.rect().contains(z) {
        return Err(Error::contract("stationary", format!("{z} is not in both quadrants")));
    }
    let from_a = exit_time(&nested_process(outer, bulk, a)?, z)?.value();
    let from_b = exit_time(&nested_process(outer, bulk, b)?, z)?.value();
    Ok((from_a <= m) == (from_b < -n))
}

/// `pairs` repetitions of `e1, -e2` from `start`.
pub fn staircase_path(start: LatticePoint, pairs: usize) -> GeodesicPath {
    let mut path = GeodesicPath::new(start);
    for _ in 0..pairs {
        path.steps.push(Step::E1);
        path.steps.push(Step::NegE2);
    }
    path
}

/// Increments of `G^rho` along a down-right path: `G(q) - G(p)` for an
/// `e1` edge `p -> q` and `G(p) - G(q)` for a `-e2` edge.
pub fn down_right_increment_sample(
    process: &StationaryLpp,
    path: &GeodesicPath,
) -> Result<Vec<(Direction, f64)>> {
    let rect = process.rect();
    if let Some(p) = path.points().find(|&p| !rect.contains(p)) {
        return Err(Error::contract("stationary", format!("path point {p} outside {rect}")));
    }
    path.edges()
        .into_iter()
        .zip(&path.steps)
        .map(|((p, q), step)| match step {
            Step::E1 => Ok((Direction::Horizontal, process.get(q) - process.get(p))),
            Step::NegE2 => Ok((Direction::Vertical, process.get(p) - process.get(q))),
            _ => Err(Error::contract("stationary", format!("{step:?} is not a down-right step"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::generate_bulk;
    use crate::random::make_stream;
    use crate::stationary::make_sw_boundary;

    fn dyadic_process(seed: u64, k: u64, base: LatticePoint, hi: LatticePoint) -> (StationaryLpp, WeightField) {
        let rect = LatticeRect::new(base + LatticePoint::new(1, 1), hi).unwrap();
        let s = make_stream(seed, k);
        let mut bulk = generate_bulk(rect, &mut s.clone()).unwrap();
        bulk.snap_dyadic(30);
        let mut b = make_sw_boundary(0.5, base, rect.width(), rect.height(), &mut s.fork(1)).unwrap();
        b.snap_dyadic(30);
        (stationary_forward(&b, &bulk).unwrap(), bulk)
    }

    #[test]
    fn nesting_at_base_is_identity() {
        let (s, _) = dyadic_process(1, 0, LatticePoint::ORIGIN, LatticePoint::new(6, 6));
        assert_eq!(&nested_boundary_from_increments(&s, LatticePoint::ORIGIN).unwrap(), s.boundary());
        assert!(nested_boundary_from_increments(&s, LatticePoint::new(6, 2)).is_err());
    }

    #[test]
    fn nested_geodesics_agree() {
        for k in 0..40 {
            let (s, bulk) = dyadic_process(2, k, LatticePoint::ORIGIN, LatticePoint::new(20, 20));
            let z = LatticePoint::new((k % 5) as i64, (k % 7) as i64);
            for y in [LatticePoint::new(20, 20), LatticePoint::new(12, 19), LatticePoint::new(19, 9)] {
                assert!(check_nested_geodesic_agreement(&s, &bulk, z, y).unwrap());
            }
        }
    }

    #[test]
    fn exit_equivalence_small_and_medium() {
        for k in 0..100 {
            let (s, bulk) = dyadic_process(3, k, LatticePoint::new(0, -1), LatticePoint::new(3, 3));
            for z in [LatticePoint::new(2, 1), LatticePoint::new(3, 3), LatticePoint::new(2, 3)] {
                assert!(check_exit_equivalence(&s, &bulk, 1, 1, z).unwrap());
            }
            let (s, bulk) = dyadic_process(4, k, LatticePoint::new(-2, -5), LatticePoint::new(18, 15));
            for z in [LatticePoint::new(6, 1), LatticePoint::new(18, 15), LatticePoint::new(10, 4)] {
                assert!(check_exit_equivalence(&s, &bulk, 5, 3, z).unwrap());
            }
        }
    }

    #[test]
    fn axis_path_returns_boundary() {
        let (s, _) = dyadic_process(5, 0, LatticePoint::ORIGIN, LatticePoint::new(8, 8));
        let mut path = GeodesicPath::new(LatticePoint::ORIGIN);
        path.steps = vec![Step::E1; 8];
        let inc = down_right_increment_sample(&s, &path).unwrap();
        let values: Vec<f64> = inc.iter().map(|&(_, v)| v).collect();
        assert_eq!(values, s.boundary().horizontal());
    }

    #[test]
    fn staircase_shape() {
        let p = staircase_path(LatticePoint::new(0, 3), 3);
        assert_eq!(p.end(), LatticePoint::new(3, 0));
        let (s, _) = dyadic_process(6, 0, LatticePoint::ORIGIN, LatticePoint::new(3, 3));
        let inc = down_right_increment_sample(&s, &p).unwrap();
        assert_eq!(inc.len(), 6);
        assert!(inc.iter().all(|&(_, v)| v > 0.0));
        assert!(down_right_increment_sample(&s, &staircase_path(LatticePoint::new(0, 3), 4)).is_err());
    }
}
