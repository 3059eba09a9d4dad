//! Exit-time estimators on stationary windows `[[0, hi]]` with south-west
//! boundary weights.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use super::runner::{purpose, replica_stream, run_replicas, tally_grid, Family, GridEstimate, RunSettings};
use crate::error::{Error, Result};
use crate::lattice::{scale_two_thirds, LatticePoint, LatticeRect};
use crate::lpp::generate_bulk_limited;
use crate::stationary::{characteristic_point, exit_labels_all, exit_time, make_sw_boundary, stationary_forward, StationaryLpp};
use crate::stats::{mean, std_dev, variance, variance_std_error};

fn stationary_window(
    settings: &RunSettings,
    kind: ExperimentKind,
    k: u64,
    rho: f64,
    hi: LatticePoint,
) -> Result<StationaryLpp> {
    let hi = LatticePoint::new(hi.x1.max(1), hi.x2.max(1));
    let rect = LatticeRect::new(LatticePoint::new(1, 1), hi)?;
    let bulk = generate_bulk_limited(rect, &mut replica_stream(settings, kind, k, purpose::BULK), settings.max_cells)?;
    let mut stream = replica_stream(settings, kind, k, purpose::BOUNDARY);
    let boundary = make_sw_boundary(rho, LatticePoint::ORIGIN, hi.x1 as usize, hi.x2 as usize, &mut stream)?;
    stationary_forward(&boundary, &bulk)
}

fn nonzero_target(rho: f64, n: u64) -> Result<LatticePoint> {
    let v = characteristic_point(rho, n)?.point;
    if v == LatticePoint::ORIGIN {
        return Err(Error::contract("experiments", format!("v_N is the origin for N = {n}, rho = {rho}")));
    }
    Ok(v)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::contract("experiments", "grid must be nonempty with finite nonnegative values"));
    }
    Ok(())
}

/// Estimates `P{|Z(0 -> v_N)| >= r N^{2/3}}`.
pub fn run_exit_tail(rho: f64, n: u64, rs: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(rs)?;
    let v = nonzero_target(rho, n)?;
    let scale = scale_two_thirds(n);
    let kind = ExperimentKind::ExitTail;
    let fam = [Family { name: "r", grid: rs.to_vec(), increasing: Some(false) }];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let process = stationary_window(settings, kind, k, rho, v)?;
        let z = exit_time(&process, v)?.abs() as f64;
        Ok(rs.iter().map(|&r| z >= r * scale).collect())
    })
}

/// Wrong-sign exits for horizontally shifted endpoints: `b_plus` records
/// `Z <= -1` at `v_N + s e1`, `b_minus` records `Z >= 1` at `v_N - s e1`,
/// with `s = floor(b N^{2/3})`.
pub fn run_exit_shifted(rho: f64, n: u64, bs: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(bs)?;
    let v = nonzero_target(rho, n)?;
    let shifts: Vec<i64> = bs.iter().map(|&b| super::coalescence::separation(b, n)).collect();
    let widest = *shifts.iter().max().unwrap();
    if widest > v.x1 || (widest == v.x1 && v.x2 == 0) {
        return Err(Error::contract(
            "experiments",
            format!("shift {widest} moves v_N - s e1 off the quadrant (v_N = {v})"),
        ));
    }
    let hi = LatticePoint::new(v.x1 + widest, v.x2);
    let kind = ExperimentKind::ExitShifted;
    let fam = [
        Family { name: "b_plus", grid: bs.to_vec(), increasing: Some(false) },
        Family { name: "b_minus", grid: bs.to_vec(), increasing: Some(false) },
    ];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let process = stationary_window(settings, kind, k, rho, hi)?;
        let labels = exit_labels_all(&process);
        let z = |x1: i64| labels.raw(LatticePoint::new(x1, v.x2));
        let mut row: Vec<bool> = shifts.iter().map(|&s| z(v.x1 + s) <= -1).collect();
        row.extend(shifts.iter().map(|&s| z(v.x1 - s) >= 1));
        Ok(row)
    })
}

/// Small and large exits over all endpoints off `[[0, v_N]]`. The `delta`
/// family records `min |Z(0 -> z)| <= delta N^{2/3}`, the `delta_forall`
/// family records `min |Z(0 -> z)| >= delta N^{2/3}`.
///
/// Every geodesic to a point off the rectangle crosses the band of points
/// just north or east of it, and the labels there are monotone, so the
/// minimum over that band decides both events.
pub fn run_exit_small(rho: f64, n: u64, deltas: &[f64], settings: &RunSettings) -> Result<GridEstimate> {
    check_grid(deltas)?;
    let v = characteristic_point(rho, n)?.point;
    let hi = v + LatticePoint::new(1, 1);
    let scale = scale_two_thirds(n);
    let kind = ExperimentKind::ExitSmall;
    let fam = [
        Family { name: "delta", grid: deltas.to_vec(), increasing: Some(true) },
        Family { name: "delta_forall", grid: deltas.to_vec(), increasing: Some(false) },
    ];
    tally_grid(settings, &settings.context(kind, rho, n), &fam, |k| {
        let process = stationary_window(settings, kind, k, rho, hi)?;
        let labels = exit_labels_all(&process);
        let east = (0..=hi.x2).map(|j| LatticePoint::new(hi.x1, j));
        let north = (0..hi.x1).map(|i| LatticePoint::new(i, hi.x2));
        let smallest = east.chain(north).map(|z| labels.raw(z).abs()).min().unwrap() as f64;
        let mut row: Vec<bool> = deltas.iter().map(|&d| smallest <= d * scale).collect();
        row.extend(deltas.iter().map(|&d| smallest >= d * scale));
        Ok(row)
    })
}

/// Both sides of the variance identity for `G^rho(0, w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub rho: f64,
    pub w: LatticePoint,
    pub replicas: u64,
    /// Sample variance of `G^rho(0, w)`.
    pub lhs: f64,
    pub lhs_se: f64,
    /// `-w1/(1-rho)^2 + w2/rho^2 + 2/(1-rho) E[sum of the first Z+ boundary weights]`.
    pub rhs: f64,
    pub rhs_se: f64,
    pub wall_time_s: f64,
}

impl VarianceReport {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs / self.rhs - 1.0).abs()
    }
}

/// Variance identity at `w = v_N`.
pub fn check_variance_identity(rho: f64, n: u64, settings: &RunSettings) -> Result<VarianceReport> {
    check_variance_identity_at(rho, nonzero_target(rho, n)?, settings)
}

pub fn check_variance_identity_at(rho: f64, w: LatticePoint, settings: &RunSettings) -> Result<VarianceReport> {
    if !LatticePoint::ORIGIN.le(&w) || w == LatticePoint::ORIGIN {
        return Err(Error::contract("experiments", format!("w = {w} must be a nonzero point of the quadrant")));
    }
    if settings.replicas < 2 {
        return Err(Error::insufficient("experiments", "variance needs at least 2 replicas"));
    }
    let kind = ExperimentKind::VarianceIdentity;
    let started = Instant::now();
    let samples = run_replicas(settings, |k| {
        let process = stationary_window(settings, kind, k, rho, w)?;
        let z = exit_time(&process, w)?.value();
        let boundary_sum: f64 = process.boundary().horizontal()[..z.max(0) as usize].iter().sum();
        Ok((process.get(w), boundary_sum))
    })?;
    let (g, s): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    let c = 2.0 / (1.0 - rho);
    let count = s.len() as f64;
    Ok(VarianceReport {
        rho,
        w,
        replicas: settings.replicas,
        lhs: variance(&g),
        lhs_se: variance_std_error(&g),
        rhs: -(w.x1 as f64) / (1.0 - rho).powi(2) + w.x2 as f64 / (rho * rho) + c * mean(&s),
        rhs_se: c * std_dev(&s) / count.sqrt(),
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
