//! Coalescence, fluctuation and duality estimators. Each replica draws one
//! Busemann window and evaluates every grid point on it.

use std::time::Instant;

use super::config::ExperimentKind;
use super::runner::{purpose, replica_stream, run_replicas, tally_grid, tally_rows, Family, GridEstimate, RunSettings};
use crate::busemann::{check_duality_events, coalescence_point, semi_infinite_geodesic, BusemannWindow};
use crate::error::{Error, Result};
use crate::lattice::{robust_floor, scale_two_thirds, LatticePoint, LatticeRect};
use crate::stationary::characteristic_point;

pub(crate) fn separation(t: f64, n: u64) -> i64 {
    robust_floor(t * scale_two_thirds(n))
}

fn separations(grid: &[f64], n: u64) -> Vec<i64> {
    grid.iter().map(|&t| separation(t, n)).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::contract("experiments", "grid must be nonempty with finite nonnegative values"));
    }
    Ok(())
}

fn check_r_grid(rho: f64, n: u64, rs: &[f64]) -> Result<()> {
    let ceiling = (1.0 - rho).powi(2).min(rho * rho) * (n as f64).cbrt();
    if let Some(&r) = rs.iter().find(|&&r| r > ceiling) {
        return Err(Error::hypothesis(
            "experiments",
            format!("r <= ((1-rho)^2 min rho^2) N^(1/3) violated: r = {r} exceeds {ceiling:.6}"),
        ));
    }
    Ok(())
}

struct Setup {
    v: LatticePoint,
    target: LatticeRect,
}

fn setup(rho: f64, n: u64) -> Result<Setup> {
    let v = characteristic_point(rho, n)?.point;
    Ok(Setup {
        v,
        target: LatticeRect::from_origin(v)?,
    })
}

fn sample_window(settings: &RunSettings, kind: ExperimentKind, k: u64, rho: f64, n: u64, window: LatticeRect) -> Result<BusemannWindow> {
    let mut stream = replica_stream(settings, kind, k, purpose::BULK);
    BusemannWindow::sample(rho, n, settings.far_multiplier, window, &mut stream, settings.max_cells)
}

/// Whether the geodesics from `x` and `y` merge inside `target`; starts
/// outside the target never do.
fn merges_inside(b: &BusemannWindow, x: LatticePoint, y: LatticePoint, target: LatticeRect) -> Result<bool> {
    if !target.contains(x) || !target.contains(y) {
        return Ok(false);
    }
    Ok(coalescence_point(b, x, y, target)?.inside)
}

/// Estimates `P{geodesics from (s,0) and (0,s) merge outside [[0, v_N]]}`,
/// `s = floor(delta N^{2/3})`.
pub fn run_coal_slow(rho: f64, n: u64, deltas: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(deltas)?;
    let seps = separations(deltas, n);
    if let Some(i) = seps.iter().position(|&s| s == 0) {
        return Err(Error::degenerate(
            "experiments",
            format!("delta >= N^(-2/3) violated: floor({} N^(2/3)) = 0", deltas[i]),
        ));
    }
    let Setup { target, .. } = setup(rho, n)?;
    let kind = ExperimentKind::CoalSlow;
    let fam = [Family { name: "delta", grid: deltas.to_vec(), increasing: Some(true) }];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let b = sample_window(settings, kind, k, rho, n, target)?;
        seps.iter()
            .map(|&s| Ok(!merges_inside(&b, LatticePoint::new(s, 0), LatticePoint::new(0, s), target)?))
            .collect()
    })
}

/// Estimates `P{geodesics from (s,0) and (0,s) merge inside [[0, v_N]]}`,
/// `s = floor(r N^{2/3})`.
pub fn run_coal_fast(rho: f64, n: u64, rs: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(rs)?;
    check_r_grid(rho, n, rs)?;
    let seps = separations(rs, n);
    let Setup { target, .. } = setup(rho, n)?;
    let kind = ExperimentKind::CoalFast;
    let fam = [Family { name: "r", grid: rs.to_vec(), increasing: Some(false) }];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let b = sample_window(settings, kind, k, rho, n, target)?;
        seps.iter()
            .map(|&s| merges_inside(&b, LatticePoint::new(s, 0), LatticePoint::new(0, s), target))
            .collect()
    })
}

/// The two coalescence estimates with starts `0` and `(s,0)`: the `delta`
/// family counts merges outside `[[0, v_N]]`, the `r` family merges inside.
pub fn run_coal_corner(rho: f64, n: u64, deltas: &[f64], rs: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    if deltas.is_empty() && rs.is_empty() {
        return Err(Error::contract("experiments", "coal_corner needs a delta or an r grid"));
    }
    for g in [deltas, rs] {
        if !g.is_empty() {
            check_grid(g)?;
        }
    }
    check_r_grid(rho, n, rs)?;
    let (d_seps, r_seps) = (separations(deltas, n), separations(rs, n));
    let Setup { target, .. } = setup(rho, n)?;
    let kind = ExperimentKind::CoalCorner;
    let fam = [
        Family { name: "delta", grid: deltas.to_vec(), increasing: Some(true) },
        Family { name: "r", grid: rs.to_vec(), increasing: Some(false) },
    ];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let b = sample_window(settings, kind, k, rho, n, target)?;
        let inside = |s: i64| merges_inside(&b, LatticePoint::ORIGIN, LatticePoint::new(s, 0), target);
        let mut row = Vec::with_capacity(d_seps.len() + r_seps.len());
        for &s in &d_seps {
            row.push(!inside(s)?);
        }
        for &s in &r_seps {
            row.push(inside(s)?);
        }
        Ok(row)
    })
}

/// Estimates `P{the semi-infinite geodesic from 0 enters [[v_N - s(1,1), v_N]]}`,
/// `s = floor(delta N^{2/3})`. A zero `s` leaves no square to enter.
pub fn run_fluctuation(rho: f64, n: u64, deltas: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(deltas)?;
    let seps = separations(deltas, n);
    let Setup { v, target } = setup(rho, n)?;
    let kind = ExperimentKind::Fluctuation;
    let fam = [Family { name: "delta", grid: deltas.to_vec(), increasing: Some(true) }];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let b = sample_window(settings, kind, k, rho, n, target)?;
        let path = semi_infinite_geodesic(&b, LatticePoint::ORIGIN)?;
        // Smallest square around v_N the path touches.
        let closest = path
            .points()
            .filter(|z| z.le(&v))
            .map(|z| (v.x1 - z.x1).max(v.x2 - z.x2))
            .min()
            .expect("path starts at the origin");
        Ok(seps.iter().map(|&s| s >= 1 && closest <= s).collect())
    })
}

/// Primal and dual sides of the coalescence/dual-geodesic event identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityEstimate {
    /// `delta` records for the primal event, then `delta_dual` for the dual one.
    pub estimate: GridEstimate,
    /// Realization and grid pairs where the two events disagree.
    pub mismatches: u64,
}

/// Evaluates both events of the duality identity on every replica.
pub fn run_duality_check(rho: f64, n: u64, deltas: &[f64], settings: &RunSettings) -> Result<DualityEstimate> {
    check_grid(deltas)?;
    let seps = separations(deltas, n);
    let Setup { target, .. } = setup(rho, n)?;
    let kind = ExperimentKind::DualityCheck;
    let started = Instant::now();
    let rows = run_replicas(settings, |k| {
        let b = sample_window(settings, kind, k, rho, n, target)?;
        let outcomes: Vec<_> = seps.iter().map(|&s| check_duality_events(&b, n, s)).collect::<Result<_>>()?;
        let mut row: Vec<bool> = outcomes.iter().map(|o| o.primal).collect();
        row.extend(outcomes.iter().map(|o| o.dual));
        Ok(row)
    })?;
    let m = seps.len();
    let mismatches = rows
        .iter()
        .map(|row| (0..m).filter(|&i| row[i] != row[m + i]).count() as u64)
        .sum();
    let fam = [
        Family { name: "delta", grid: deltas.to_vec(), increasing: Some(true) },
        Family { name: "delta_dual", grid: deltas.to_vec(), increasing: Some(true) },
    ];
    let estimate = tally_rows(&settings.context(kind, rho, n), &fam, &rows, started.elapsed().as_secs_f64());
    Ok(DualityEstimate { estimate, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(replicas: u64) -> RunSettings {
        RunSettings::new(replicas, 5)
    }

    #[test]
    fn slow_rejects_zero_separation() {
        let err = run_coal_slow(0.5, 100, &[0.01], &settings(2)).unwrap_err();
        assert!(matches!(err, Error::DegenerateParameter { .. }));
    }

    #[test]
    fn fast_rejects_large_r() {
        let err = run_coal_fast(0.5, 1000, &[3.0], &settings(2)).unwrap_err();
        assert!(err.to_string().contains("r <= ((1-rho)^2 min rho^2) N^(1/3)"));
    }

    #[test]
    fn coupled_grids_are_monotone() {
        let s = settings(40);
        let slow = run_coal_slow(0.5, 200, &[0.1, 0.2, 0.4, 0.8], &s).unwrap();
        assert_eq!(slow.monotonicity_violations, 0);
        let hits: Vec<u64> = slow.records.iter().map(|r| r.hits).collect();
        assert!(hits.windows(2).all(|w| w[0] <= w[1]), "{hits:?}");
        let fast = run_coal_fast(0.5, 200, &[0.2, 0.4, 0.8], &s).unwrap();
        assert_eq!(fast.monotonicity_violations, 0);
        let fl = run_fluctuation(0.5, 200, &[0.05, 0.2, 0.8], &s).unwrap();
        assert_eq!(fl.monotonicity_violations, 0);
    }

    #[test]
    fn corner_zero_separation_never_outside() {
        let est = run_coal_corner(0.5, 100, &[0.0, 0.3], &[0.0], &settings(10)).unwrap();
        assert_eq!(est.records[0].hits, 0);
        assert_eq!(est.records[2].hits, 10);
        assert_eq!(est.monotonicity_violations, 0);
    }

    #[test]
    fn fluctuation_empty_square() {
        let est = run_fluctuation(0.5, 100, &[0.01], &settings(10)).unwrap();
        assert_eq!(est.records[0].p_hat, 0.0);
    }

    #[test]
    fn duality_events_agree() {
        let d = run_duality_check(0.5, 120, &[0.1, 0.3, 0.6, 1.5], &settings(30)).unwrap();
        assert_eq!(d.mismatches, 0);
        let (primal, dual) = d.estimate.records.split_at(4);
        for (a, b) in primal.iter().zip(dual) {
            assert_eq!(a.hits, b.hits);
        }
    }

    #[test]
    fn worker_count_does_not_change_hits() {
        let base = settings(12);
        let a = run_coal_fast(0.5, 100, &[0.3, 0.6], &base.with_workers(1)).unwrap();
        let b = run_coal_fast(0.5, 100, &[0.3, 0.6], &base.with_workers(2)).unwrap();
        let hits = |e: &GridEstimate| e.records.iter().map(|r| r.hits).collect::<Vec<_>>();
        assert_eq!(hits(&a), hits(&b));
    }
}
