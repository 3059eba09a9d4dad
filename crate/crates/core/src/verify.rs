//! Exact per-realization checks of the structural lemmas, plus the
//! appendix checks. All random fields here are snapped to a dyadic grid so
//! that identities between sums of weights hold bit for bit.

use serde::{Deserialize, Serialize};

use crate::busemann::{
    additivity_violations, busemann_ne_process, busemann_sw_process, check_busemann_consistency,
    check_dual_restriction, check_duality_events, non_crossing_violations, BusemannWindow,
};
use crate::busemann::DEFAULT_FAR_MULTIPLIER;
use crate::error::Result;
use crate::experiments::runner::run_replicas;
use crate::experiments::{check_radon_nikodym, check_rw_bound, CheckResult, RunSettings};
use crate::lattice::{robust_floor, LatticePoint, LatticeRect};
use crate::lpp::{check_increment_monotonicity, generate_bulk, WeightField};
use crate::random::RngStream;
use crate::stationary::{
    characteristic_point, check_exit_equivalence, check_nested_geodesic_agreement, make_sw_boundary,
    stationary_forward, StationaryLpp,
};

const SNAP_BITS: u32 = 30;
const VERIFY_LABEL: u64 = 0x7e71f;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifySuite {
    Exact,
    Appendix,
    All,
}

/// Tally of one exact identity over many realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub realizations: u64,
    pub cases: u64,
    pub violations: u64,
}

pub const EXACT_CHECKS: [&str; 8] = [
    "increment_monotonicity",
    "nested_geodesic_agreement",
    "nested_exit_equivalence",
    "busemann_additivity",
    "primal_dual_non_crossing",
    "dual_geodesic_restriction",
    "busemann_boundary_consistency",
    "coalescence_dual_event_equality",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub lemma_checks: Vec<LemmaCheck>,
    pub checks: Vec<CheckResult>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.asserted).all(|c| c.passed)
    }
}

fn stream(seed: u64, n: u64, replica: u64, purpose: u64) -> RngStream {
    RngStream::new(seed, replica).fork(VERIFY_LABEL << 24 | n << 4 | purpose)
}

fn dyadic_bulk(rect: LatticeRect, s: &mut RngStream) -> Result<WeightField> {
    let mut bulk = generate_bulk(rect, s)?;
    bulk.snap_dyadic(SNAP_BITS);
    Ok(bulk)
}

/// Stationary process based at `base` over `[[base, hi]]` with dyadic weights.
fn dyadic_process(base: LatticePoint, hi: LatticePoint, s: &mut RngStream) -> Result<(StationaryLpp, WeightField)> {
    let bulk = dyadic_bulk(LatticeRect::new(base + LatticePoint::new(1, 1), hi)?, s)?;
    let d = hi - base;
    let mut boundary = make_sw_boundary(0.5, base, d.x1 as usize, d.x2 as usize, s)?;
    boundary.snap_dyadic(SNAP_BITS);
    Ok((stationary_forward(&boundary, &bulk)?, bulk))
}

type Tally = [(u64, u64); 8];

fn count(t: &mut (u64, u64), ok: bool) {
    t.0 += 1;
    t.1 += (!ok) as u64;
}

/// All eight identities on one realization at scale `n`.
fn one_realization(seed: u64, n: u64, k: u64) -> Result<Tally> {
    let rho = 0.5;
    let v = characteristic_point(rho, n)?.point;
    let mid = LatticePoint::new(v.x1 / 2, v.x2 / 2);
    let mut t: Tally = [(0, 0); 8];

    // Increment ordering for coupled tables from x, x - e1, x - e2.
    let bulk = dyadic_bulk(LatticeRect::from_origin(v)?, &mut stream(seed, n, k, 1))?;
    for x in [LatticePoint::new(1, 1), mid, v - LatticePoint::new(1, 1)] {
        count(&mut t[0], check_increment_monotonicity(&bulk, x)? == 0);
    }

    // Nested processes share geodesics inside the nested quadrant.
    let (outer, bulk) = dyadic_process(LatticePoint::ORIGIN, v, &mut stream(seed, n, k, 2))?;
    for z in [LatticePoint::ORIGIN, LatticePoint::new(1, 3), mid] {
        for y in [v, LatticePoint::new(v.x1, mid.x2 + 1), LatticePoint::new(mid.x1 + 1, v.x2)] {
            count(&mut t[1], check_nested_geodesic_agreement(&outer, &bulk, z, y)?);
        }
    }

    // Exit comparison between processes based at (0,0) and (m,-l).
    let (m, l) = ((v.x1 / 4).max(1), (v.x2 / 4).max(1));
    let (outer, bulk) = dyadic_process(LatticePoint::new(0, -l), v, &mut stream(seed, n, k, 3))?;
    for z in [v, LatticePoint::new(m + 1, 1), LatticePoint::new(v.x1, 1), LatticePoint::new(m + 1, v.x2), LatticePoint::new(mid.x1.max(m + 1), mid.x2.max(1))] {
        count(&mut t[2], check_exit_equivalence(&outer, &bulk, m, l, z)?);
    }

    // Busemann window on [[0, v_N]] from a dyadic field on [[0, u_M]].
    let far = characteristic_point(rho, robust_floor(DEFAULT_FAR_MULTIPLIER * n as f64) as u64)?.point;
    let field = dyadic_bulk(LatticeRect::from_origin(far)?, &mut stream(seed, n, k, 4))?;
    let window = LatticeRect::from_origin(v)?;
    let b = BusemannWindow::from_bulk(&field, rho, window)?;
    let area = window.area() as u64;
    t[3].0 += area;
    t[3].1 += additivity_violations(&b) as u64;
    t[4].0 += area;
    t[4].1 += non_crossing_violations(&b) as u64;
    for w in [LatticePoint::new(1, 1), mid + LatticePoint::new(1, 1), v, v + LatticePoint::new(1, 1)] {
        count(&mut t[5], check_dual_restriction(&b, w)?);
    }
    let extent = LatticePoint::new((v.x1 - mid.x1).max(1), (v.x2 - mid.x2).max(1));
    let sw = busemann_sw_process(&b, mid, extent)?;
    let corner = LatticePoint::new(mid.x1.max(1), mid.x2.max(1));
    let ne = busemann_ne_process(&b, &field, corner, corner)?;
    count(&mut t[6], check_busemann_consistency(&b, &sw, &ne));
    for s in [1, 2, (v.x1 / 4).max(1), v.x1 / 2, v.x1, v.x1 + 1] {
        let o = check_duality_events(&b, n, s)?;
        count(&mut t[7], o.primal == o.dual);
    }
    Ok(t)
}

/// Runs the exact identities at each scale over `realizations` fields each.
pub fn run_exact_suite(sizes: &[u64], realizations: u64, master_seed: u64, workers: usize) -> Result<Vec<LemmaCheck>> {
    let settings = RunSettings::new(realizations, master_seed).with_workers(workers);
    let mut out = Vec::new();
    for &n in sizes {
        let tallies = run_replicas(&settings, |k| one_realization(master_seed, n, k))?;
        for (i, name) in EXACT_CHECKS.iter().enumerate() {
            let (cases, violations) = tallies.iter().fold((0, 0), |acc, t| (acc.0 + t[i].0, acc.1 + t[i].1));
            out.push(LemmaCheck {
                name: name.to_string(),
                n,
                realizations,
                cases,
                violations,
            });
        }
    }
    Ok(out)
}

/// Appendix checks at their reference parameters.
pub fn run_appendix_suite(master_seed: u64, workers: usize) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let rn = check_radon_nikodym(0.5, 0.75, &[1], &RunSettings::new(1_000_000, master_seed).with_workers(workers))?;
    let row = &rn.rows[0];
    checks.push(CheckResult::new(
        "density_ratio_monte_carlo",
        row.relative_error <= 0.01,
        true,
        "relative error <= 1% (rho 0.5, lambda 0.75, n 1, 1e6 samples)",
        format!("closed {:.6}, mc {:.6}", row.closed_form, row.monte_carlo),
    ));
    let viol = rn.bound_violations();
    checks.push(CheckResult::new(
        "density_ratio_bound_under_size_hypothesis",
        viol.is_empty(),
        true,
        "ln E[f^2] <= bound whenever N >= |b|^3 rho^-3 (1-eta)^-3",
        format!(
            "{} violating cases; first: {}",
            viol.len(),
            viol.first().map_or("none".into(), |c| format!(
                "N={} a={} b={} eta={} ln E[f^2]={:.3} > {:.3}",
                c.n_scale, c.a, c.b, c.eta, c.log_closed_form, c.log_bound
            ))
        ),
    ));
    let rw = check_rw_bound(2.0, 1.0, &[1, 10, 100], 0.5, &RunSettings::new(200_000, master_seed).with_workers(workers))?;
    let monotone = rw.monotonicity_violations == 0 && rw.rows.windows(2).all(|w| w[0].p_hat >= w[1].p_hat);
    checks.push(CheckResult::new(
        "walk_survival_monotone",
        monotone,
        true,
        "non-increasing in n, exact under coupling",
        format!(
            "p_hat {:?}, limit (alpha-beta)/alpha = {}, implied constants {:?}",
            rw.rows.iter().map(|r| r.p_hat).collect::<Vec<_>>(),
            rw.limit,
            rw.rows.iter().map(|r| r.implied_constant).collect::<Vec<_>>()
        ),
    ));
    Ok(checks)
}

pub const EXACT_SIZES: [u64; 2] = [50, 200];
pub const EXACT_REALIZATIONS: u64 = 200;

pub fn run_verify(suite: VerifySuite, master_seed: u64, workers: usize) -> Result<VerifyOutcome> {
    let mut lemma_checks = Vec::new();
    let mut checks = Vec::new();
    if suite != VerifySuite::Appendix {
        lemma_checks = run_exact_suite(&EXACT_SIZES, EXACT_REALIZATIONS, master_seed, workers)?;
        for c in &lemma_checks {
            checks.push(CheckResult::new(
                &format!("{}_n{}", c.name, c.n),
                c.violations == 0,
                true,
                "0 violations",
                format!("{} violations in {} cases over {} realizations", c.violations, c.cases, c.realizations),
            ));
        }
    }
    if suite != VerifySuite::Exact {
        checks.extend(run_appendix_suite(master_seed, workers)?);
    }
    Ok(VerifyOutcome { lemma_checks, checks })
}
