use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::geodesics::{coalescence_point, dual_geodesic};
use super::window::{far_target, BusemannWindow};
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeRect};
use crate::lpp::{generate_bulk, PassageTable, WeightField};
use crate::random::RngStream;
use crate::stationary::{
    characteristic_point, make_ne_process, stationary_forward, BoundarySide, BoundarySpec,
    StationaryLpp,
};

fn ulps_apart(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

/// Unit squares of the window on which the two two-step sums of Busemann
/// increments differ by more than 4 ulps.
pub fn additivity_violations(busemann: &BusemannWindow) -> usize {
    let (e1, e2) = (LatticePoint::new(1, 0), LatticePoint::new(0, 1));
    busemann
        .window()
        .points()
        .filter(|&x| {
            let right_up = busemann.horizontal(x) + busemann.vertical(x + e1);
            let up_right = busemann.vertical(x) + busemann.horizontal(x + e2);
            ulps_apart(right_up, up_right) > 4
        })
        .count()
}

/// South-west stationary process at `x` on `[[x, x + extent]]` whose boundary
/// weights are Busemann increments and whose bulk weights are dual weights.
pub fn busemann_sw_process(
    busemann: &BusemannWindow,
    x: LatticePoint,
    extent: LatticePoint,
) -> Result<StationaryLpp> {
    let hi = x + extent;
    if !busemann.store_rect().contains(x) || !busemann.store_rect().contains(hi) || extent.x1 < 1 || extent.x2 < 1 {
        return Err(Error::contract("busemann", format!("[[{x}, {hi}]] not inside the window")));
    }
    let (e1, e2) = (LatticePoint::new(1, 0), LatticePoint::new(0, 1));
    let horizontal = (0..extent.x1)
        .map(|k| busemann.horizontal(x + LatticePoint::new(k, 0)))
        .collect();
    let vertical = (0..extent.x2)
        .map(|l| busemann.vertical(x + LatticePoint::new(0, l)))
        .collect();
    let boundary = BoundarySpec::new(busemann.rho(), x, BoundarySide::SouthWest, horizontal, vertical)?;
    let inner = LatticeRect::new(x + e1 + e2, hi)?;
    let dual = WeightField::new(inner, inner.points().map(|p| busemann.dual_weight(p)).collect())?;
    stationary_forward(&boundary, &dual)
}

/// North-east stationary process at `x` on `[[x - extent, x]]` with Busemann
/// increments on the boundary and the original bulk weights inside.
pub fn busemann_ne_process(
    busemann: &BusemannWindow,
    bulk: &WeightField,
    x: LatticePoint,
    extent: LatticePoint,
) -> Result<PassageTable> {
    let lo = x - extent;
    if !busemann.store_rect().contains(x) || !busemann.store_rect().contains(lo) || extent.x1 < 1 || extent.x2 < 1 {
        return Err(Error::contract("busemann", format!("[[{lo}, {x}]] not inside the window")));
    }
    let horizontal = (0..extent.x1)
        .map(|k| busemann.horizontal(x - LatticePoint::new(k + 1, 0)))
        .collect();
    let vertical = (0..extent.x2)
        .map(|l| busemann.vertical(x - LatticePoint::new(0, l + 1)))
        .collect();
    let boundary = BoundarySpec::new(busemann.rho(), x, BoundarySide::NorthEast, horizontal, vertical)?;
    let inner = bulk.subfield(LatticeRect::new(lo, x - LatticePoint::new(1, 1))?)?;
    make_ne_process(busemann.rho(), x, &inner, &boundary)
}

/// `G^rho(x, y') = B(x, y')` on the south-west process and
/// `G^{NE,rho}(y, x) = B(y, x)` on the north-east one, both exactly.
pub fn check_busemann_consistency(
    busemann: &BusemannWindow,
    sw: &StationaryLpp,
    ne: &PassageTable,
) -> bool {
    let x = sw.base();
    let sw_ok = sw.rect().points().all(|y| sw.get(y) == busemann.busemann(x, y));
    let x = ne.anchor();
    let ne_ok = ne.rect().points().all(|y| ne.get(y) == busemann.busemann(y, x));
    sw_ok && ne_ok
}

/// Dual geodesic edges from shifted point `w` that touch the open quadrant
/// above the window corner are edges of the stationary geodesic from the
/// corner to `w`, for the process of [`busemann_sw_process`] at the corner.
pub fn check_dual_restriction(busemann: &BusemannWindow, w: LatticePoint) -> Result<bool> {
    let base = busemann.window().lo();
    let quadrant = |p: LatticePoint| base.lt_both(&p);
    if !quadrant(w) || !busemann.dual_rect().contains(w) {
        return Err(Error::contract("busemann", format!("dual point {w} not in the quadrant of {base}")));
    }
    let process = busemann_sw_process(busemann, base, w - base)?;
    let stationary: HashSet<(LatticePoint, LatticePoint)> =
        process.table().backtrack(w)?.edges().into_iter().collect();
    let dual = dual_geodesic(busemann, w)?;
    Ok(dual
        .edges()
        .into_iter()
        .filter(|&(p, q)| quadrant(p) || quadrant(q))
        .all(|(p, q)| stationary.contains(&(q, p))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityOutcome {
    /// Geodesics from `(s,0)` and `(0,s)` do not merge inside `[[0, v_N]]`.
    pub primal: bool,
    /// Some dual geodesic started off `[[0, v_N]] - e*` enters the square
    /// `[[0, (s,s)]]`.
    pub dual: bool,
}

/// Evaluates both sides of the coalescence/dual-geodesic event equivalence
/// on one window. The window must start at the origin and contain `v_N`.
pub fn check_duality_events(busemann: &BusemannWindow, n: u64, separation: i64) -> Result<DualityOutcome> {
    let v = characteristic_point(busemann.rho(), n)?.point;
    let window = busemann.window();
    if window.lo() != LatticePoint::ORIGIN || !window.contains(v) || separation < 0 {
        return Err(Error::contract(
            "busemann",
            format!("window {window} must start at 0 and contain v_N = {v}"),
        ));
    }
    let s = separation;
    if s == 0 {
        return Ok(DualityOutcome { primal: false, dual: false });
    }
    let target = LatticeRect::from_origin(v)?;
    let primal = if s > v.x1 || s > v.x2 {
        // The merge point dominates (s, s) coordinatewise.
        true
    } else {
        !coalescence_point(busemann, LatticePoint::new(s, 0), LatticePoint::new(0, s), target)?.inside
    };

    // Shifted coordinates: dual vertex q is p = q + e*, so the square of
    // dual vertices inside [[0, (s,s)]] is [[(1,1), (s,s)]].
    let region = LatticeRect::new(LatticePoint::new(1, 1), v + LatticePoint::new(1, 1))?;
    let in_square = |p: LatticePoint| p.x1 <= s && p.x2 <= s;
    let mut reaches = vec![false; region.area()];
    for (i, p) in region.points().enumerate() {
        reaches[i] = in_square(p) || {
            let q = p.step(busemann.dual_step(p));
            region.contains(q) && reaches[region.index(q)]
        };
    }
    let dual = region
        .points()
        .filter(|p| p.x1 == v.x1 + 1 || p.x2 == v.x2 + 1)
        .any(|p| reaches[region.index(p)]);
    Ok(DualityOutcome { primal, dual })
}

/// Fraction of window vertices whose semi-infinite step changes when the far
/// target moves from `v_M` to `v_{2M}` on one coupled bulk field.
pub fn stabilization_fraction(
    rho: f64,
    n: u64,
    far_multiplier: f64,
    window: LatticeRect,
    stream: &mut RngStream,
) -> Result<f64> {
    let near = far_target(rho, n, far_multiplier)?;
    let far = far_target(rho, n, 2.0 * far_multiplier)?;
    let bulk = generate_bulk(LatticeRect::from_origin(far)?, stream)?;
    let a = BusemannWindow::from_bulk(&bulk.subfield(LatticeRect::from_origin(near)?)?, rho, window)?;
    let b = BusemannWindow::from_bulk(&bulk, rho, window)?;
    let differ = window.points().filter(|&x| a.primal_step(x) != b.primal_step(x)).count();
    Ok(differ as f64 / window.area() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::make_stream;

    fn dyadic_window(seed: u64, k: u64, n: u64, hi: LatticePoint) -> (BusemannWindow, WeightField) {
        let far = far_target(0.5, n, 4.0).unwrap();
        let mut bulk = generate_bulk(LatticeRect::from_origin(far).unwrap(), &mut make_stream(seed, k)).unwrap();
        bulk.snap_dyadic(30);
        let b = BusemannWindow::from_bulk(&bulk, 0.5, LatticeRect::from_origin(hi).unwrap()).unwrap();
        (b, bulk)
    }

    #[test]
    fn additivity_exact_on_windows() {
        for k in 0..10 {
            let (b, _) = dyadic_window(1, k, 40, LatticePoint::new(20, 20));
            assert_eq!(additivity_violations(&b), 0);
            let w = BusemannWindow::sample(0.5, 40, 4.0, b.window(), &mut make_stream(1, k), usize::MAX)
                .unwrap();
            assert_eq!(additivity_violations(&w), 0);
        }
    }

    #[test]
    fn consistency_identities() {
        for k in 0..20 {
            let (b, bulk) = dyadic_window(2, k, 60, LatticePoint::new(30, 30));
            let x = LatticePoint::new(12, 10);
            let sw = busemann_sw_process(&b, x, LatticePoint::new(15, 18)).unwrap();
            let ne = busemann_ne_process(&b, &bulk, x, LatticePoint::new(12, 10)).unwrap();
            assert!(check_busemann_consistency(&b, &sw, &ne));
            assert_eq!(sw.get(x + LatticePoint::new(1, 0)), b.horizontal(x));
            assert_eq!(sw.get(x), 0.0);
        }
    }

    #[test]
    fn dual_restriction_holds() {
        for k in 0..30 {
            let (b, _) = dyadic_window(3, k, 60, LatticePoint::new(20, 20));
            assert!(check_dual_restriction(&b, LatticePoint::new(1, 1)).unwrap());
            assert!(check_dual_restriction(&b, LatticePoint::new(16, 15)).unwrap());
            assert!(check_dual_restriction(&b, LatticePoint::new(21, 21)).unwrap());
        }
    }

    #[test]
    fn duality_events_agree() {
        for k in 0..100 {
            let (b, _) = dyadic_window(4, k, 60, LatticePoint::new(15, 15));
            for s in [0, 1, 2, 4, 8, 15, 20] {
                let out = check_duality_events(&b, 60, s).unwrap();
                assert_eq!(out.primal, out.dual, "replica {k} s {s}");
                if s == 0 {
                    assert!(!out.primal);
                }
            }
        }
    }

    #[test]
    fn stabilization_is_small() {
        let window = LatticeRect::from_origin(LatticePoint::new(25, 25)).unwrap();
        let mut total = 0.0;
        for k in 0..5 {
            total += stabilization_fraction(0.5, 100, 4.0, window, &mut make_stream(5, k)).unwrap();
        }
        assert!(total / 5.0 < 0.05, "{}", total / 5.0);
    }
}
