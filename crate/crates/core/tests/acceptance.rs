//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs at full scale (about half an hour on one core). Set
//! `CGM_ACCEPTANCE_ONLY=3,4` to run a subset. Criteria listed in
//! `EXPECTED_FAILURES` are reported as FAIL but do not fail the target;
//! every other failure does.

use std::time::Instant;

use cornergrowth::experiments::{
    check_radon_nikodym, check_rw_bound, fit_scaling, records_to_csv, run_coal_fast, run_coal_slow, run_exit_shifted,
    run_exit_small, run_exit_tail, run_fluctuation, EstimateRecord, RunSettings, ScalingTransform,
};
use cornergrowth::stats::{ks_one_sample, lag1_autocorrelation, mean, std_dev};
use cornergrowth::verify::{run_exact_suite, EXACT_REALIZATIONS, EXACT_SIZES};
use cornergrowth::{
    brute_force_lpp, characteristic_point, down_right_increment_sample, generate_bulk, lpp_backward, lpp_forward,
    make_stream, make_sw_boundary, staircase_path, stationary_forward, trace_geodesic, BusemannWindow, Direction,
    ExpRate, LatticePoint, LatticeRect,
};

/// Criteria whose failure is explained in the project notes: the
/// second-moment bound of the density-ratio lemma is exceeded on a few
/// grid points that satisfy its size hypothesis.
const EXPECTED_FAILURES: &[u32] = &[9];

const KS_LEVEL: f64 = 1e-3;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn p_hats(records: &[EstimateRecord], family: &str) -> Vec<f64> {
    let mut r: Vec<&EstimateRecord> = records.iter().filter(|r| r.param_name == family).collect();
    r.sort_by(|a, b| a.param_value.total_cmp(&b.param_value));
    r.iter().map(|r| r.p_hat).collect()
}

fn strictly_increasing(p: &[f64]) -> bool {
    p.windows(2).all(|w| w[0] < w[1])
}

/// Non-increasing, and strictly so while positive.
fn decreasing_tail(p: &[f64]) -> bool {
    p.windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0))
}

fn criterion_1() -> cornergrowth::Result<Outcome> {
    let started = Instant::now();
    let mut sizes = make_stream(101, 0);
    let mut failures = 0;
    for k in 0..1000 {
        let w = 1 + (sizes.next_uniform() * 6.0) as i64;
        let h = 1 + (sizes.next_uniform() * 6.0) as i64;
        let rect = LatticeRect::from_origin(LatticePoint::new(w - 1, h - 1))?;
        let bulk = generate_bulk(rect, &mut make_stream(102, k))?;
        let forward = lpp_forward(&bulk, rect.lo())?;
        let (best, best_path) = brute_force_lpp(&bulk, rect.lo(), rect.hi())?;
        let traced = trace_geodesic(&lpp_backward(&bulk, rect.hi())?, rect.lo())?;
        let along = traced.points().map(|p| bulk.get(p)).fold(0.0, |acc, w| w + acc);
        if forward.get(rect.hi()) != best || along != best || traced != best_path {
            failures += 1;
        }
    }
    let secs = started.elapsed().as_secs_f64();
    Ok(outcome(failures == 0 && secs < 10.0, format!("{failures} mismatches in 1000 fields, {secs:.2}s (limit 10s)")))
}

fn criterion_2() -> cornergrowth::Result<Outcome> {
    let started = Instant::now();
    let checks = run_exact_suite(&EXACT_SIZES, EXACT_REALIZATIONS, 2, 0)?;
    let bad: Vec<String> = checks.iter().filter(|c| c.violations > 0).map(|c| format!("{} N={}", c.name, c.n)).collect();
    let cases: u64 = checks.iter().map(|c| c.cases).sum();
    let secs = started.elapsed().as_secs_f64();
    Ok(outcome(
        bad.is_empty() && secs < 120.0,
        format!("{} identities x N in {{50, 200}}, {cases} cases, violations in {bad:?}, {secs:.1}s (limit 120s)", checks.len() / 2),
    ))
}

fn criterion_3() -> cornergrowth::Result<Outcome> {
    let rho = 0.5;
    let v = characteristic_point(rho, 500)?.point;
    let (mut horizontal, mut vertical, mut sequences) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..2000 {
        let s = make_stream(103, k);
        let bulk = generate_bulk(LatticeRect::new(LatticePoint::new(1, 1), v)?, &mut s.fork(1))?;
        let boundary = make_sw_boundary(rho, LatticePoint::ORIGIN, v.x1 as usize, v.x2 as usize, &mut s.fork(2))?;
        let process = stationary_forward(&boundary, &bulk)?;
        let stairs = staircase_path(LatticePoint::new(0, v.x2), v.x1.min(v.x2) as usize);
        let sample = down_right_increment_sample(&process, &stairs)?;
        let mut seq = Vec::with_capacity(sample.len());
        for (dir, w) in sample {
            seq.push(w);
            match dir {
                Direction::Horizontal => horizontal.push(w),
                Direction::Vertical => vertical.push(w),
            }
        }
        sequences.push(seq);
    }
    let within = |xs: &[f64], target: f64| (mean(xs) - target).abs() <= 3.0 * std_dev(xs) / (xs.len() as f64).sqrt();
    let (h_ok, v_ok) = (within(&horizontal, 1.0 / (1.0 - rho)), within(&vertical, 1.0 / rho));
    let r = lag1_autocorrelation(&sequences);
    let rate = ExpRate::new(0.5)?;
    let ks_h = ks_one_sample(&horizontal, |t| rate.cdf(t));
    let ks_v = ks_one_sample(&vertical, |t| rate.cdf(t));
    Ok(outcome(
        h_ok && v_ok && r.abs() < 0.05 && ks_h.passes(KS_LEVEL) && ks_v.passes(KS_LEVEL),
        format!(
            "means {:.4}/{:.4} (target 2, 3 sigma), lag-1 r {r:.4} (|r| < 0.05), KS p {:.3}/{:.3} (> 1e-3)",
            mean(&horizontal),
            mean(&vertical),
            ks_h.p_value,
            ks_v.p_value
        ),
    ))
}

fn criterion_4() -> cornergrowth::Result<Outcome> {
    let (rho, n) = (0.5, 200);
    let window = LatticeRect::from_origin(LatticePoint::ORIGIN)?;
    let (mut horizontal, mut vertical, mut dual) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..10_000 {
        let b = BusemannWindow::sample(rho, n, 4.0, window, &mut make_stream(104, k), usize::MAX)?;
        horizontal.push(b.horizontal(LatticePoint::ORIGIN));
        vertical.push(b.vertical(LatticePoint::ORIGIN));
        dual.push(b.dual_weight(LatticePoint::new(1, 1)));
    }
    let ks_h = ks_one_sample(&horizontal, |t| ExpRate::new(1.0 - rho).unwrap().cdf(t));
    let ks_v = ks_one_sample(&vertical, |t| ExpRate::new(rho).unwrap().cdf(t));
    let ks_d = ks_one_sample(&dual, |t| ExpRate::UNIT.cdf(t));
    Ok(outcome(
        ks_h.passes(KS_LEVEL) && ks_v.passes(KS_LEVEL) && ks_d.passes(KS_LEVEL),
        format!(
            "KS p horizontal {:.3}, vertical {:.3}, dual {:.3} (each > 1e-3, 1e4 samples, N = {n}, far multiplier 4)",
            ks_h.p_value, ks_v.p_value, ks_d.p_value
        ),
    ))
}

const DELTAS: [f64; 4] = [0.05, 0.1, 0.2, 0.4];

fn criterion_5() -> cornergrowth::Result<Outcome> {
    let est = run_coal_slow(0.5, 1000, &DELTAS, &RunSettings::new(10_000, 105))?;
    let p = p_hats(&est.records, "delta");
    let fit = fit_scaling(&est.records, ScalingTransform::LogLog)?;
    Ok(outcome(
        strictly_increasing(&p) && (0.7..=1.3).contains(&fit.slope) && est.monotonicity_violations == 0,
        format!("p_hat {p:?}, log-log slope {:.4} (in [0.7, 1.3]), per-realization violations {}", fit.slope, est.monotonicity_violations),
    ))
}

fn criterion_6() -> cornergrowth::Result<Outcome> {
    let est = run_coal_fast(0.5, 1000, &[0.8, 1.2, 1.6], &RunSettings::new(100_000, 106))?;
    let p = p_hats(&est.records, "r");
    let fit = fit_scaling(&est.records, ScalingTransform::LogVsR3);
    let (slope, r2) = fit.as_ref().map_or((f64::NAN, f64::NAN), |f| (f.slope, f.r_squared));
    Ok(outcome(
        decreasing_tail(&p) && slope > 0.0 && r2 >= 0.8 && est.monotonicity_violations == 0,
        format!("p_hat {p:?}, -ln p vs r^3 slope {slope:.4} (> 0), r^2 {r2:.4} (>= 0.8)"),
    ))
}

fn criterion_7() -> cornergrowth::Result<Outcome> {
    let settings = RunSettings::new(10_000, 107);
    let tail = run_exit_tail(0.5, 1000, &[0.5, 1.0, 1.5, 2.0], &settings)?;
    let p = p_hats(&tail.records, "r");
    let neg_log: Vec<f64> = p.iter().map(|&x| -x.ln()).collect();
    let rate_ok = neg_log.windows(2).all(|w| w[1] > w[0] || (w[0].is_infinite() && w[1].is_infinite()));
    let shifted = run_exit_shifted(0.5, 1000, &[0.5, 1.0, 2.0], &settings)?;
    let plus = p_hats(&shifted.records, "b_plus");
    let minus = p_hats(&shifted.records, "b_minus");
    Ok(outcome(
        decreasing_tail(&p) && rate_ok && decreasing_tail(&plus) && decreasing_tail(&minus),
        format!("tail p_hat {p:?}, -ln p {neg_log:.3?}; wrong-sign b+ {plus:?}, b- {minus:?}"),
    ))
}

fn criterion_8() -> cornergrowth::Result<Outcome> {
    let settings = RunSettings::new(10_000, 108);
    let small = run_exit_small(0.5, 1000, &DELTAS, &settings)?;
    let exists: Vec<EstimateRecord> = small.records.iter().filter(|r| r.param_name == "delta").cloned().collect();
    let fit = fit_scaling(&exists, ScalingTransform::LogLog)?;
    let fl = run_fluctuation(0.5, 1000, &DELTAS, &settings)?;
    let p = p_hats(&fl.records, "delta");
    let ratio = p[1] / p[3];
    Ok(outcome(
        (0.7..=1.3).contains(&fit.slope) && strictly_increasing(&p) && ratio < 0.6,
        format!(
            "small-exit p_hat {:?}, slope {:.4} (in [0.7, 1.3]); fluctuation p_hat {p:?}, p(0.1)/p(0.4) {ratio:.4} (< 0.6)",
            p_hats(&exists, "delta"),
            fit.slope
        ),
    ))
}

fn criterion_9() -> cornergrowth::Result<Outcome> {
    let started = Instant::now();
    let rn = check_radon_nikodym(0.5, 0.75, &[1], &RunSettings::new(1_000_000, 109))?;
    let row = &rn.rows[0];
    let closed_ok = (row.closed_form - 1.125).abs() < 1e-15 && row.relative_error < 0.01;
    let viol = rn.bound_violations();
    let walk = check_rw_bound(2.0, 1.0, &[1, 10, 100], 0.5, &RunSettings::new(200_000, 109))?;
    let walk_p: Vec<f64> = walk.rows.iter().map(|r| r.p_hat).collect();
    let walk_ok = walk.monotonicity_violations == 0 && walk_p.windows(2).all(|w| w[0] >= w[1]);
    let secs = started.elapsed().as_secs_f64();
    let first = viol.first().map_or(String::from("none"), |c| {
        format!("N={} a={} b={} eta={}: {:.3} > {:.3}", c.n_scale, c.a, c.b, c.eta, c.log_closed_form, c.log_bound)
    });
    Ok(outcome(
        closed_ok && viol.is_empty() && walk_ok && secs < 60.0,
        format!(
            "closed form {:.6}, sampled {:.6} (1%: {}); bound violated in {} hypothesis cases, e.g. {first}; \
             walk p_hat {walk_p:?} monotone {walk_ok}, limit term {}; {secs:.1}s",
            row.closed_form,
            row.monte_carlo,
            if closed_ok { "ok" } else { "off" },
            viol.len(),
            walk.limit
        ),
    ))
}

fn criterion_10() -> cornergrowth::Result<Outcome> {
    let run = |workers| -> cornergrowth::Result<String> {
        let s = RunSettings::new(64, 110).with_workers(workers);
        let mut records = run_coal_fast(0.5, 300, &[0.3, 0.6, 0.9], &s)?.records;
        records.extend(run_exit_tail(0.5, 300, &[0.5, 1.0], &s)?.records);
        records_to_csv(&records, false)
    };
    let (one, three) = (run(1)?, run(3)?);
    Ok(outcome(one == three, format!("CSV with 1 vs 3 workers: {} bytes, identical {}", one.len(), one == three)))
}

fn main() {
    let only: Option<Vec<u32>> = std::env::var("CGM_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let criteria: [(u32, fn() -> cornergrowth::Result<Outcome>); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let started = Instant::now();
        let result = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let tag = if result.passed { "PASS" } else { "FAIL" };
        let note = if !result.passed && EXPECTED_FAILURES.contains(&id) { " (expected)" } else { "" };
        println!("criterion {id:>2}: {tag}{note} [{:.1}s] {}", started.elapsed().as_secs_f64(), result.detail);
        if !result.passed && !EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
