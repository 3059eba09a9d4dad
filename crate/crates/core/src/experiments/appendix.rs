//! Numeric checks of the two auxiliary lemmas: a persistence bound for a
//! random walk with exponential increments, and the second moment of an
//! exponential density ratio.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use super::record::EstimateRecord;
use super::runner::{purpose, replica_stream, run_replicas, tally_rows, Family, RunSettings};
use crate::error::{Error, Result};
use crate::lattice::{robust_floor, scale_two_thirds};
use crate::random::{sample_exp, ExpRate};
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkBoundRow {
    pub n: u64,
    pub p_hat: f64,
    /// `(1 - (a-b)^2/(a+b)^2)^n / sqrt(n)`.
    pub bracket: f64,
    /// `(p_hat - limit) / bracket`: the constant the bound would need here.
    pub implied_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkBoundReport {
    pub alpha: f64,
    pub beta: f64,
    /// `(alpha - beta) / alpha`, the probability of never reaching 0.
    pub limit: f64,
    pub rows: Vec<WalkBoundRow>,
    #[serde(skip)]
    pub records: Vec<EstimateRecord>,
    /// Realizations whose survival indicator increased with `n`; always 0.
    pub monotonicity_violations: u64,
}

/// Estimates `P(S_1 < 0, ..., S_n < 0)` for `S_k` a sum of `k` copies of
/// `Exp(alpha) - Exp(beta)`, one coupled walk per replica.
pub fn check_rw_bound(alpha: f64, beta: f64, ns: &[u64], rho_echo: f64, settings: &RunSettings) -> Result<WalkBoundReport> {
    if !(beta > 0.0 && alpha > beta && alpha.is_finite()) {
        return Err(Error::contract(
            "experiments",
            format!("alpha > beta > 0 required, got alpha = {alpha}, beta = {beta}"),
        ));
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::contract("experiments", "walk lengths must be positive"));
    }
    let (up, down) = (ExpRate::new(alpha)?, ExpRate::new(beta)?);
    let horizon = *ns.iter().max().unwrap();
    let kind = ExperimentKind::RwBound;
    let started = Instant::now();
    let rows = run_replicas(settings, |k| {
        let mut stream = replica_stream(settings, kind, k, purpose::WALK);
        let mut sum = 0.0;
        let mut survived = horizon;
        for step in 1..=horizon {
            sum += sample_exp(&mut stream, up) - sample_exp(&mut stream, down);
            if sum >= 0.0 {
                survived = step - 1;
                break;
            }
        }
        Ok(ns.iter().map(|&n| survived >= n).collect::<Vec<bool>>())
    })?;
    let grid: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let fam = [Family { name: "n", grid, increasing: Some(false) }];
    let ctx = settings.context(kind, rho_echo, 0);
    let est = tally_rows(&ctx, &fam, &rows, started.elapsed().as_secs_f64());
    let limit = (alpha - beta) / alpha;
    let q = 1.0 - ((alpha - beta) / (alpha + beta)).powi(2);
    let table = ns
        .iter()
        .zip(&est.records)
        .map(|(&n, r)| {
            let bracket = q.powf(n as f64) / (n as f64).sqrt();
            WalkBoundRow {
                n,
                p_hat: r.p_hat,
                bracket,
                implied_constant: (r.p_hat - limit) / bracket,
            }
        })
        .collect();
    Ok(WalkBoundReport {
        alpha,
        beta,
        limit,
        rows: table,
        records: est.records,
        monotonicity_violations: est.monotonicity_violations,
    })
}

/// `E[f^2]` for `f` the density of `n` i.i.d. `Exp(lambda)` variables with
/// respect to `Exp(rho)`: `(lambda^2 / (rho (2 lambda - rho)))^n`, infinite
/// when `2 lambda <= rho`.
pub fn density_ratio_second_moment(rho: f64, lambda: f64, n: u64) -> f64 {
    if 2.0 * lambda <= rho {
        return f64::INFINITY;
    }
    (lambda * lambda / (rho * (2.0 * lambda - rho))).powf(n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u64,
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub std_error: f64,
    pub relative_error: f64,
}

/// One point of the bound grid: `lambda = rho + b N^{-1/3}`,
/// dimension `floor(a N^{2/3})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCase {
    #[serde(rename = "N")]
    pub n_scale: u64,
    pub a: f64,
    pub b: f64,
    pub eta: f64,
    pub dimension: u64,
    /// `N >= |b|^3 rho^-3 (1-eta)^-3`.
    pub hypothesis_holds: bool,
    /// `2 |b| N^{-1/3} <= rho (1 - eta)`, a stricter tilt restriction.
    pub strict_holds: bool,
    /// `ln E[f^2]`, possibly infinite.
    pub log_closed_form: f64,
    /// `a b^2 / rho^2 + 10 a |b|^3 / (3 rho^3 eta N^{1/3})`.
    pub log_bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRatioReport {
    pub rho: f64,
    pub lambda: f64,
    /// `2 lambda <= rho`: the second moment is infinite and no sampling is done.
    pub divergent: bool,
    pub rows: Vec<MomentRow>,
    pub bound_cases: Vec<BoundCase>,
}

impl DensityRatioReport {
    /// Cases satisfying the size hypothesis whose closed form exceeds the bound.
    pub fn bound_violations(&self) -> Vec<&BoundCase> {
        self.bound_cases.iter().filter(|c| c.hypothesis_holds && !c.within_bound).collect()
    }

    pub fn strict_violations(&self) -> Vec<&BoundCase> {
        self.bound_cases.iter().filter(|c| c.strict_holds && !c.within_bound).collect()
    }
}

pub const BOUND_SCALES: [u64; 3] = [1000, 8000, 64000];
pub const BOUND_A: [f64; 3] = [0.5, 1.0, 2.0];
pub const BOUND_B: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
pub const BOUND_ETA: [f64; 5] = [0.2, 0.4, 0.5, 0.6, 0.8];

pub fn bound_case(rho: f64, n_scale: u64, a: f64, b: f64, eta: f64) -> BoundCase {
    let cube = (n_scale as f64).cbrt();
    let lambda = rho + b / cube;
    let dimension = robust_floor(a * scale_two_thirds(n_scale)).max(0) as u64;
    // Relative slack absorbs rounding when the hypothesis holds with equality.
    let needed = (b.abs() / (rho * (1.0 - eta))).powi(3);
    let hypothesis_holds = n_scale as f64 >= needed * (1.0 - 1e-12);
    let strict_holds = 2.0 * b.abs() / cube <= rho * (1.0 - eta);
    let log_closed_form = if lambda <= 0.0 || 2.0 * lambda <= rho {
        f64::INFINITY
    } else {
        dimension as f64 * (lambda * lambda / (rho * (2.0 * lambda - rho))).ln()
    };
    let log_bound = a * b * b / (rho * rho) + 10.0 * a * b.abs().powi(3) / (3.0 * rho.powi(3) * eta * cube);
    BoundCase {
        n_scale,
        a,
        b,
        eta,
        dimension,
        hypothesis_holds,
        strict_holds,
        log_closed_form,
        log_bound,
        within_bound: log_closed_form <= log_bound,
    }
}

/// Closed form and Monte Carlo estimate of `E[f^2]` for each dimension in
/// `ns`, plus the bound comparison over a fixed parameter grid.
pub fn check_radon_nikodym(rho: f64, lambda: f64, ns: &[u64], settings: &RunSettings) -> Result<DensityRatioReport> {
    if !(rho > 0.0 && lambda > 0.0) {
        return Err(Error::contract("experiments", format!("rho = {rho} and lambda = {lambda} must be positive")));
    }
    let mut bound_cases = Vec::new();
    for &n_scale in &BOUND_SCALES {
        for &a in &BOUND_A {
            for &b in &BOUND_B {
                for &eta in &BOUND_ETA {
                    bound_cases.push(bound_case(rho, n_scale, a, b, eta));
                }
            }
        }
    }
    let divergent = 2.0 * lambda <= rho;
    let mut rows = Vec::new();
    if !divergent {
        let base = ExpRate::new(rho)?;
        let kind = ExperimentKind::RadonNikodym;
        let ratio = (lambda / rho).powi(2);
        for &n in ns {
            let samples = run_replicas(settings, |k| {
                let mut stream = replica_stream(settings, kind, k, n << 16 | purpose::DENSITY);
                let mut f2 = 1.0;
                for _ in 0..n {
                    let x = sample_exp(&mut stream, base);
                    f2 *= ratio * (-2.0 * (lambda - rho) * x).exp();
                }
                Ok(f2)
            })?;
            let closed_form = density_ratio_second_moment(rho, lambda, n);
            let monte_carlo = mean(&samples);
            rows.push(MomentRow {
                n,
                closed_form,
                monte_carlo,
                std_error: std_dev(&samples) / (samples.len() as f64).sqrt(),
                relative_error: (monte_carlo / closed_form - 1.0).abs(),
            });
        }
    }
    Ok(DensityRatioReport {
        rho,
        lambda,
        divergent,
        rows,
        bound_cases,
    })
}
