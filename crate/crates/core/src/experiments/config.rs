use serde::{Deserialize, Serialize};

use crate::busemann::DEFAULT_FAR_MULTIPLIER;
use crate::error::{Error, Result};
use crate::lattice::{robust_floor, scale_two_thirds};
use crate::lpp::DEFAULT_MAX_CELLS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    CoalSlow,
    CoalFast,
    CoalCorner,
    ExitTail,
    ExitShifted,
    ExitSmall,
    Fluctuation,
    VarianceIdentity,
    RwBound,
    RadonNikodym,
    DualityCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::CoalSlow,
        ExperimentKind::CoalFast,
        ExperimentKind::CoalCorner,
        ExperimentKind::ExitTail,
        ExperimentKind::ExitShifted,
        ExperimentKind::ExitSmall,
        ExperimentKind::Fluctuation,
        ExperimentKind::VarianceIdentity,
        ExperimentKind::RwBound,
        ExperimentKind::RadonNikodym,
        ExperimentKind::DualityCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::CoalSlow => "coal_slow",
            ExperimentKind::CoalFast => "coal_fast",
            ExperimentKind::CoalCorner => "coal_corner",
            ExperimentKind::ExitTail => "exit_tail",
            ExperimentKind::ExitShifted => "exit_shifted",
            ExperimentKind::ExitSmall => "exit_small",
            ExperimentKind::Fluctuation => "fluctuation",
            ExperimentKind::VarianceIdentity => "variance_identity",
            ExperimentKind::RwBound => "rw_bound",
            ExperimentKind::RadonNikodym => "radon_nikodym",
            ExperimentKind::DualityCheck => "duality_check",
        }
    }

    /// Stream label namespace, so two experiments with one master seed never
    /// share random numbers.
    pub(crate) fn tag(self) -> u64 {
        ExperimentKind::ALL.iter().position(|&k| k == self).unwrap() as u64 + 1
    }
}

fn default_rho() -> f64 {
    0.5
}

fn default_far() -> f64 {
    DEFAULT_FAR_MULTIPLIER
}

fn default_max_cells() -> usize {
    DEFAULT_MAX_CELLS
}

fn default_replicas() -> u64 {
    1000
}

/// One experiment. `grid` holds the main parameter (delta, r, b, or walk
/// lengths n, or vector dimensions for the Radon-Nikodym check); `r_grid`
/// is the second grid of `coal_corner`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(rename = "N", alias = "n", default)]
    pub n: u64,
    #[serde(default)]
    pub grid: Vec<f64>,
    #[serde(default)]
    pub r_grid: Vec<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default = "default_replicas")]
    pub replicas: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_far")]
    pub far_multiplier: f64,
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, rho: f64, n: u64, grid: Vec<f64>, replicas: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            rho,
            n,
            grid,
            r_grid: Vec::new(),
            alpha: None,
            beta: None,
            lambda: None,
            replicas,
            master_seed,
            far_multiplier: DEFAULT_FAR_MULTIPLIER,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Separation `floor(t N^{2/3})` used for a grid value `t`.
    pub fn separation(&self, t: f64) -> i64 {
        robust_floor(t * scale_two_thirds(self.n))
    }

    /// `((1-rho)^2 min rho^2) N^{1/3}`, the largest admissible fast-coalescence `r`.
    pub fn r_ceiling(&self) -> f64 {
        let c = ((1.0 - self.rho).powi(2)).min(self.rho.powi(2));
        c * (self.n as f64).cbrt()
    }

    /// Checks every hypothesis the experiment relies on.
    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::Config(format!("rho in (0,1) required, got {}", self.rho)));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be at least 1".into()));
        }
        if !(self.far_multiplier >= 1.0 && self.far_multiplier.is_finite()) {
            return Err(Error::Config(format!("far_multiplier must be at least 1, got {}", self.far_multiplier)));
        }
        let needs_lattice = !matches!(self.experiment, RwBound | RadonNikodym);
        if needs_lattice && self.n == 0 {
            return Err(Error::Config("N must be at least 1".into()));
        }
        let needs_grid = !matches!(self.experiment, VarianceIdentity | RadonNikodym);
        if needs_grid && self.grid.is_empty() {
            return Err(Error::Config(format!("{} needs a nonempty grid", self.experiment.name())));
        }
        if let Some(bad) = self.grid.iter().chain(&self.r_grid).find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::Config(format!("grid values must be finite and nonnegative, got {bad}")));
        }
        match self.experiment {
            CoalSlow | CoalCorner => {
                for &d in &self.grid {
                    if self.separation(d) < 1 {
                        return Err(Error::DegenerateParameter {
                            module: "experiments",
                            message: format!(
                                "delta >= N^(-2/3) violated: floor({d} N^(2/3)) = 0 for N = {}",
                                self.n
                            ),
                        });
                    }
                }
                let rs = if self.experiment == CoalCorner { &self.r_grid } else { &Vec::new() };
                self.check_r_hypothesis(rs)?;
            }
            CoalFast => {
                self.check_r_hypothesis(&self.grid)?;
                if let Some(&r) = self.grid.iter().find(|&&r| self.separation(r) < 1) {
                    return Err(Error::DegenerateParameter {
                        module: "experiments",
                        message: format!("floor({r} N^(2/3)) = 0, the two starts coincide"),
                    });
                }
            }
            RwBound => {
                let (a, b) = (self.alpha.unwrap_or(0.0), self.beta.unwrap_or(0.0));
                if !(b > 0.0 && a > b) {
                    return Err(Error::hypothesis("experiments", format!("alpha > beta > 0 required, got alpha = {a}, beta = {b}")));
                }
                if self.grid.iter().any(|&n| n < 1.0 || n.fract() != 0.0) {
                    return Err(Error::Config("rw_bound grid holds walk lengths n >= 1".into()));
                }
            }
            RadonNikodym => {
                let l = self.lambda.unwrap_or(f64::NAN);
                if !(l > 0.0) {
                    return Err(Error::Config("radon_nikodym needs lambda > 0".into()));
                }
                if 2.0 * l <= self.rho {
                    return Err(Error::hypothesis("experiments", format!(
                            "2 lambda > rho required (second moment diverges): lambda = {l}, rho = {}",
                            self.rho
                        )));
                }
                if self.grid.iter().any(|&n| n < 1.0 || n.fract() != 0.0) {
                    return Err(Error::Config("radon_nikodym grid holds dimensions n >= 1".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn check_r_hypothesis(&self, rs: &[f64]) -> Result<()> {
        let ceiling = self.r_ceiling();
        if let Some(&r) = rs.iter().find(|&&r| r > ceiling) {
            return Err(Error::Hypothesis {
                module: "experiments",
                message: format!(
                    "r <= ((1-rho)^2 min rho^2) N^(1/3) violated: r = {r} exceeds {ceiling:.6}"
                ),
            });
        }
        Ok(())
    }
}
