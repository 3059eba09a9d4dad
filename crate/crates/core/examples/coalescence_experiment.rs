//! Slow and fast coalescence estimates on coupled grids.
//!
//! `cargo run --release --example coalescence_experiment -- [N] [replicas]`

use cornergrowth::experiments::{fit_scaling, run_coal_fast, run_coal_slow, RunSettings, ScalingTransform};

fn main() -> cornergrowth::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(300, |a| a.parse().expect("N"));
    let replicas: u64 = args.next().map_or(400, |a| a.parse().expect("replicas"));
    let settings = RunSettings::new(replicas, 2024);

    let started = std::time::Instant::now();
    let slow = run_coal_slow(0.5, n, &[0.1, 0.2, 0.4, 0.8], &settings)?;
    println!("merge outside [[0, v_N]] from (s,0), (0,s):");
    for r in &slow.records {
        println!("  delta {:>4}  p {:.4}  [{:.4}, {:.4}]", r.param_value, r.p_hat, r.ci_lo, r.ci_hi);
    }
    if let Ok(fit) = fit_scaling(&slow.records, ScalingTransform::LogLog) {
        println!("  log-log slope {:.3} (r^2 {:.3})", fit.slope, fit.r_squared);
    }

    let fast = run_coal_fast(0.5, n, &[0.4, 0.8, 1.2], &settings)?;
    println!("merge inside [[0, v_N]]:");
    for r in &fast.records {
        println!("  r {:>4}  p {:.4}  [{:.4}, {:.4}]", r.param_value, r.p_hat, r.ci_lo, r.ci_hi);
    }
    println!(
        "monotonicity violations: {} slow, {} fast; {:.1}s",
        slow.monotonicity_violations,
        fast.monotonicity_violations,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
