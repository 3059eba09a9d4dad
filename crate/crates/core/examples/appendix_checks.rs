//! Random-walk persistence and density-ratio second moments.

use cornergrowth::experiments::{check_radon_nikodym, check_rw_bound, RunSettings};

fn main() -> cornergrowth::Result<()> {
    let walk = check_rw_bound(2.0, 1.0, &[1, 5, 10, 50, 100], 0.5, &RunSettings::new(200_000, 4))?;
    println!("P(S_1 < 0, ..., S_n < 0), alpha = 2, beta = 1, limit {}", walk.limit);
    for row in &walk.rows {
        println!("  n = {:>3}: {:.5}  bracket {:.3e}", row.n, row.p_hat, row.bracket);
    }

    let rn = check_radon_nikodym(0.5, 0.75, &[1, 4, 16], &RunSettings::new(500_000, 4))?;
    for row in &rn.rows {
        println!("E[f^2], n = {:>2}: closed {:.5}, sampled {:.5} +- {:.5}", row.n, row.closed_form, row.monte_carlo, row.std_error);
    }
    let viol = rn.bound_violations();
    println!("bound grid: {} cases meet the size hypothesis, {} exceed the bound", rn.bound_cases.iter().filter(|c| c.hypothesis_holds).count(), viol.len());
    for c in viol {
        println!("  N={} a={} b={} eta={}: ln E[f^2] {:.3} > {:.3}", c.n_scale, c.a, c.b, c.eta, c.log_closed_form, c.log_bound);
    }
    Ok(())
}
