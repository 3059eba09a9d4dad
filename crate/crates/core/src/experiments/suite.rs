use serde::{Deserialize, Serialize};

use super::appendix::{check_radon_nikodym, check_rw_bound};
use super::coalescence::{run_coal_corner, run_coal_fast, run_coal_slow, run_duality_check, run_fluctuation};
use super::config::{ExperimentConfig, ExperimentKind};
use super::exit::{check_variance_identity, run_exit_shifted, run_exit_small, run_exit_tail};
use super::record::{fit_scaling, CheckResult, EstimateRecord, ScalingFit, ScalingTransform};
use super::runner::{GridEstimate, RunSettings};
use crate::error::{Error, Result};
use crate::lattice::scale_two_thirds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub family: String,
    #[serde(flatten)]
    pub fit: ScalingFit,
}

/// Everything one experiment produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: ExperimentKind,
    #[serde(skip)]
    pub records: Vec<EstimateRecord>,
    pub fits: Vec<NamedFit>,
    pub checks: Vec<CheckResult>,
    /// Experiment-specific report (variance sides, bound tables, ...).
    pub report: serde_json::Value,
}

impl ExperimentOutput {
    /// Whether every asserted check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.asserted).all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fit(&self, family: &str) -> Option<&ScalingFit> {
        self.fits.iter().find(|f| f.family == family).map(|f| &f.fit)
    }

    pub fn family(&self, name: &str) -> Vec<&EstimateRecord> {
        self.records.iter().filter(|r| r.param_name == name).collect()
    }
}

struct Builder {
    out: ExperimentOutput,
}

impl Builder {
    fn new(kind: ExperimentKind) -> Self {
        Builder {
            out: ExperimentOutput {
                experiment: kind,
                records: Vec::new(),
                fits: Vec::new(),
                checks: Vec::new(),
                report: serde_json::Value::Null,
            },
        }
    }

    fn grid(&mut self, est: GridEstimate) {
        self.out.checks.push(CheckResult::new(
            "per_realization_monotonicity",
            est.monotonicity_violations == 0,
            true,
            "0 violations",
            format!("{} realizations out of order", est.monotonicity_violations),
        ));
        self.out.records.extend(est.records);
    }

    fn check(&mut self, name: &str, passed: bool, asserted: bool, tolerance: impl Into<String>, detail: impl Into<String>) {
        self.out.checks.push(CheckResult::new(name, passed, asserted, tolerance, detail));
    }

    fn fit(&mut self, family: &str, transform: ScalingTransform) -> Option<ScalingFit> {
        let recs: Vec<EstimateRecord> = self.out.records.iter().filter(|r| r.param_name == family).cloned().collect();
        match fit_scaling(&recs, transform) {
            Ok(fit) => {
                self.out.fits.push(NamedFit { family: family.to_string(), fit });
                Some(fit)
            }
            Err(e) => {
                self.check(&format!("{family}_fit_available"), false, false, ">= 3 usable points", e.to_string());
                None
            }
        }
    }

    /// Monotone trend of `p_hat` across the family, allowing overlap of the
    /// Wilson intervals of neighbours.
    fn trend(&mut self, family: &str, increasing: bool, strict: bool) {
        let mut recs: Vec<&EstimateRecord> = self.out.records.iter().filter(|r| r.param_name == family).collect();
        recs.sort_by(|a, b| a.param_value.total_cmp(&b.param_value));
        let ok = recs.windows(2).all(|w| {
            let (a, b) = if increasing { (w[0], w[1]) } else { (w[1], w[0]) };
            if strict {
                a.p_hat < b.p_hat
            } else {
                a.p_hat <= b.p_hat || a.ci_lo <= b.ci_hi
            }
        });
        let p: Vec<String> = recs.iter().map(|r| format!("{:.4}", r.p_hat)).collect();
        let dir = if increasing { "increasing" } else { "decreasing" };
        let (name, tol) = if strict {
            (format!("{family}_strictly_{dir}"), "strict".to_string())
        } else {
            (format!("{family}_{dir}"), "up to Wilson 95% overlap".to_string())
        };
        self.check(&name, ok, false, tol, format!("p_hat = [{}]", p.join(", ")));
    }

    fn slope_band(&mut self, family: &str, lo: f64, hi: f64) {
        if let Some(fit) = self.fit(family, ScalingTransform::LogLog) {
            let ok = fit.slope >= lo && fit.slope <= hi;
            self.check(
                &format!("{family}_loglog_slope"),
                ok,
                false,
                format!("[{lo}, {hi}]"),
                format!("slope {:.4}, r^2 {:.4}", fit.slope, fit.r_squared),
            );
        }
    }

    fn cubic_rate(&mut self, family: &str, min_r2: Option<f64>) {
        if let Some(fit) = self.fit(family, ScalingTransform::LogVsR3) {
            let ok = fit.slope > 0.0 && min_r2.map_or(true, |m| fit.r_squared >= m);
            let tol = match min_r2 {
                Some(m) => format!("slope > 0, r^2 >= {m}"),
                None => "slope > 0".to_string(),
            };
            self.check(
                &format!("{family}_cubic_rate"),
                ok,
                false,
                tol,
                format!("slope {:.4}, r^2 {:.4}", fit.slope, fit.r_squared),
            );
        }
    }
}

fn walk_lengths(grid: &[f64]) -> Vec<u64> {
    grid.iter().map(|&n| n as u64).collect()
}

/// Runs the configured experiment with `workers` threads (0 = default).
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    use ExperimentKind::*;
    config.validate()?;
    let settings = RunSettings::from_config(config, workers);
    let (rho, n, grid) = (config.rho, config.n, config.grid.as_slice());
    let mut b = Builder::new(config.experiment);
    match config.experiment {
        CoalSlow => {
            b.grid(run_coal_slow(rho, n, grid, &settings)?);
            b.trend("delta", true, true);
            b.slope_band("delta", 0.7, 1.3);
        }
        CoalFast => {
            b.grid(run_coal_fast(rho, n, grid, &settings)?);
            b.trend("r", false, false);
            b.cubic_rate("r", Some(0.8));
        }
        CoalCorner => {
            b.grid(run_coal_corner(rho, n, grid, &config.r_grid, &settings)?);
            b.trend("delta", true, false);
            if !config.r_grid.is_empty() {
                b.trend("r", false, false);
            }
        }
        ExitTail => {
            b.grid(run_exit_tail(rho, n, grid, &settings)?);
            b.trend("r", false, false);
            b.cubic_rate("r", None);
        }
        ExitShifted => {
            b.grid(run_exit_shifted(rho, n, grid, &settings)?);
            b.trend("b_plus", false, false);
            b.trend("b_minus", false, false);
        }
        ExitSmall => {
            b.grid(run_exit_small(rho, n, grid, &settings)?);
            let scale = scale_two_thirds(n);
            let exists = b.out.family("delta").into_iter().cloned().collect::<Vec<_>>();
            let forall = b.out.family("delta_forall").into_iter().cloned().collect::<Vec<_>>();
            let mut bad = Vec::new();
            for (e, f) in exists.iter().zip(&forall) {
                let t = e.param_value * scale;
                if t.fract() != 0.0 && e.hits + f.hits != e.replicas {
                    bad.push(e.param_value);
                }
            }
            b.check(
                "exists_forall_complementary",
                bad.is_empty(),
                true,
                "exact at non-integer thresholds",
                format!("failing delta values: {bad:?}"),
            );
            b.trend("delta", true, false);
            b.slope_band("delta", 0.7, 1.3);
        }
        Fluctuation => {
            b.grid(run_fluctuation(rho, n, grid, &settings)?);
            b.trend("delta", true, false);
            let at = |t: f64| b.out.family("delta").iter().find(|r| r.param_value == t).map(|r| r.p_hat);
            if let (Some(lo), Some(hi)) = (at(0.1), at(0.4)) {
                let ratio = lo / hi;
                b.check("ratio_0.1_over_0.4", ratio < 0.6, false, "< 0.6", format!("{ratio:.4}"));
            }
        }
        VarianceIdentity => {
            let rep = check_variance_identity(rho, n, &settings)?;
            let gap = rep.relative_gap();
            b.check("variance_sides_agree", gap < 0.1, false, "|lhs/rhs - 1| < 0.1", format!("{gap:.4}"));
            b.out.report = serde_json::to_value(&rep).expect("report serializes");
        }
        RwBound => {
            let (alpha, beta) = (config.alpha.unwrap(), config.beta.unwrap());
            let rep = check_rw_bound(alpha, beta, &walk_lengths(grid), rho, &settings)?;
            b.grid(super::runner::GridEstimate {
                records: rep.records.clone(),
                monotonicity_violations: rep.monotonicity_violations,
            });
            let mut rows = rep.rows.clone();
            rows.sort_by_key(|r| r.n);
            let ok = rows.windows(2).all(|w| w[0].p_hat >= w[1].p_hat);
            b.check("survival_non_increasing_in_n", ok, true, "exact (coupled walks)", "");
            b.out.report = serde_json::to_value(&rep).expect("report serializes");
        }
        RadonNikodym => {
            let lambda = config.lambda.unwrap();
            let dims = if grid.is_empty() { vec![1] } else { walk_lengths(grid) };
            let rep = check_radon_nikodym(rho, lambda, &dims, &settings)?;
            for row in &rep.rows {
                let ok = row.relative_error <= 0.01 || (row.monte_carlo - row.closed_form).abs() <= 4.0 * row.std_error;
                b.check(
                    &format!("monte_carlo_matches_closed_form_n{}", row.n),
                    ok,
                    true,
                    "relative error <= 1% or within 4 standard errors",
                    format!("closed {:.6}, mc {:.6} +- {:.6}", row.closed_form, row.monte_carlo, row.std_error),
                );
            }
            let viol = rep.bound_violations();
            b.check(
                "closed_form_within_bound_under_size_hypothesis",
                viol.is_empty(),
                true,
                "ln E[f^2] <= bound for every grid case meeting the hypothesis",
                format!(
                    "{} of {} cases violate; e.g. {}",
                    viol.len(),
                    rep.bound_cases.iter().filter(|c| c.hypothesis_holds).count(),
                    viol.first().map_or("none".to_string(), |c| format!(
                        "N={} a={} b={} eta={}: {:.3} > {:.3}",
                        c.n_scale, c.a, c.b, c.eta, c.log_closed_form, c.log_bound
                    ))
                ),
            );
            let strict = rep.strict_violations();
            b.check(
                "closed_form_within_bound_under_strict_tilt",
                strict.is_empty(),
                false,
                "2|b|N^(-1/3) <= rho (1 - eta)",
                format!("{} violations", strict.len()),
            );
            b.out.report = serde_json::to_value(&rep).expect("report serializes");
        }
        DualityCheck => {
            let d = run_duality_check(rho, n, grid, &settings)?;
            b.check("primal_dual_events_equal", d.mismatches == 0, true, "0 mismatches", format!("{} mismatches", d.mismatches));
            b.grid(d.estimate);
        }
    }
    if b.out.records.iter().any(|r| !(r.ci_lo <= r.p_hat && r.p_hat <= r.ci_hi)) {
        return Err(Error::contract("experiments", "Wilson interval excludes its estimate"));
    }
    Ok(b.out)
}
