//! Exit-time tail and wrong-sign exits for shifted endpoints.

use cornergrowth::experiments::{fit_scaling, run_exit_shifted, run_exit_tail, RunSettings, ScalingTransform};

fn main() -> cornergrowth::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(500, |a| a.parse().expect("N"));
    let settings = RunSettings::new(2000, 1);
    let tail = run_exit_tail(0.5, n, &[0.25, 0.5, 0.75, 1.0], &settings)?;
    for r in &tail.records {
        println!("P(|Z| >= {:.2} N^(2/3)) = {:.4}", r.param_value, r.p_hat);
    }
    if let Ok(fit) = fit_scaling(&tail.records, ScalingTransform::LogVsR3) {
        println!("-ln p against r^3: slope {:.3}, r^2 {:.3}", fit.slope, fit.r_squared);
    }
    let shifted = run_exit_shifted(0.5, n, &[0.0, 0.5, 1.0, 2.0], &settings)?;
    for r in &shifted.records {
        println!("{:>7} b = {:.1}: wrong sign with probability {:.4}", r.param_name, r.param_value, r.p_hat);
    }
    Ok(())
}
