use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::{EstimateRecord, RecordContext};
use crate::busemann::DEFAULT_FAR_MULTIPLIER;
use crate::error::{Error, Result};
use crate::lpp::DEFAULT_MAX_CELLS;
use crate::random::RngStream;

/// Replica count, seed and resource settings shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub replicas: u64,
    pub master_seed: u64,
    pub far_multiplier: f64,
    pub max_cells: usize,
    /// Worker threads; 0 means the rayon default.
    pub workers: usize,
}

impl RunSettings {
    pub fn new(replicas: u64, master_seed: u64) -> Self {
        RunSettings {
            replicas,
            master_seed,
            far_multiplier: DEFAULT_FAR_MULTIPLIER,
            max_cells: DEFAULT_MAX_CELLS,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn from_config(config: &ExperimentConfig, workers: usize) -> Self {
        RunSettings {
            replicas: config.replicas,
            master_seed: config.master_seed,
            far_multiplier: config.far_multiplier,
            max_cells: config.max_cells,
            workers,
        }
    }

    pub(crate) fn context(&self, kind: ExperimentKind, rho: f64, n: u64) -> RecordContext {
        RecordContext {
            experiment: kind.name().to_string(),
            rho,
            n,
            replicas: self.replicas,
            master_seed: self.master_seed,
            far_multiplier: self.far_multiplier,
        }
    }
}

/// Stream purposes within one replica.
pub(crate) mod purpose {
    pub const BULK: u64 = 1;
    pub const BOUNDARY: u64 = 2;
    pub const WALK: u64 = 3;
    pub const DENSITY: u64 = 4;
}

pub(crate) fn replica_stream(settings: &RunSettings, kind: ExperimentKind, replica: u64, purpose: u64) -> RngStream {
    RngStream::new(settings.master_seed, replica).fork(kind.tag() << 8 | purpose)
}

/// Evaluates `job` on every replica index and returns results in index
/// order, so any reduction over them is independent of the worker count.
pub(crate) fn run_replicas<T, F>(settings: &RunSettings, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| (0..settings.replicas).into_par_iter().map(&job).collect())
}

/// One family of coupled indicators: a parameter name with its grid and the
/// direction in which each realization's indicator must be monotone.
#[derive(Debug, Clone)]
pub(crate) struct Family {
    pub name: &'static str,
    pub grid: Vec<f64>,
    /// `Some(true)`: non-decreasing in the parameter; `Some(false)`: non-increasing.
    pub increasing: Option<bool>,
}

/// Estimates for a coupled grid, with the count of realizations whose
/// indicators broke the monotonicity forced by geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEstimate {
    pub records: Vec<EstimateRecord>,
    pub monotonicity_violations: u64,
}

fn monotone(values: &[bool], grid: &[f64], increasing: bool) -> bool {
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    order.windows(2).all(|w| {
        let (a, b) = (values[w[0]], values[w[1]]);
        if increasing {
            a <= b
        } else {
            a >= b
        }
    })
}

/// Runs `job` per replica (one indicator per family grid point, families
/// concatenated) and tallies hits into records.
pub(crate) fn tally_grid<F>(
    settings: &RunSettings,
    ctx: &RecordContext,
    families: &[Family],
    job: F,
) -> Result<GridEstimate>
where
    F: Fn(u64) -> Result<Vec<bool>> + Sync,
{
    let started = Instant::now();
    let width: usize = families.iter().map(|f| f.grid.len()).sum();
    let rows = run_replicas(settings, |k| {
        let row = job(k)?;
        debug_assert_eq!(row.len(), width);
        Ok(row)
    })?;
    Ok(tally_rows(ctx, families, &rows, started.elapsed().as_secs_f64()))
}

pub(crate) fn tally_rows(ctx: &RecordContext, families: &[Family], rows: &[Vec<bool>], wall: f64) -> GridEstimate {
    let width: usize = families.iter().map(|f| f.grid.len()).sum();
    let mut hits = vec![0u64; width];
    let mut violations = 0u64;
    for row in rows {
        for (h, &b) in hits.iter_mut().zip(row) {
            *h += b as u64;
        }
        let mut offset = 0;
        let mut ok = true;
        for f in families {
            let part = &row[offset..offset + f.grid.len()];
            if let Some(inc) = f.increasing {
                ok &= monotone(part, &f.grid, inc);
            }
            offset += f.grid.len();
        }
        violations += (!ok) as u64;
    }
    let mut records = Vec::with_capacity(width);
    let mut offset = 0;
    for f in families {
        for (i, &t) in f.grid.iter().enumerate() {
            let mut r = EstimateRecord::new(ctx, f.name, t, hits[offset + i]);
            r.wall_time_s = wall;
            records.push(r);
        }
        offset += f.grid.len();
    }
    GridEstimate {
        records,
        monotonicity_violations: violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_worker_invariant() {
        let base = RunSettings::new(64, 9);
        let job = |k: u64| Ok(replica_stream(&base, ExperimentKind::ExitTail, k, purpose::BULK).next_uniform());
        let one = run_replicas(&base.with_workers(1), job).unwrap();
        let three = run_replicas(&base.with_workers(3), job).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn namespaces_differ() {
        let s = RunSettings::new(1, 9);
        let a = replica_stream(&s, ExperimentKind::CoalSlow, 0, purpose::BULK).next_uniform();
        let b = replica_stream(&s, ExperimentKind::CoalFast, 0, purpose::BULK).next_uniform();
        assert_ne!(a, b);
    }

    #[test]
    fn tally_counts_and_monotonicity() {
        let s = RunSettings::new(10, 0);
        let ctx = s.context(ExperimentKind::CoalSlow, 0.5, 10);
        let fam = [Family { name: "delta", grid: vec![0.2, 0.1], increasing: Some(true) }];
        // Replica k hits at 0.2 unless k = 3, at 0.1 when k is even.
        let est = tally_grid(&s, &ctx, &fam, |k| Ok(vec![k != 3, k % 2 == 0])).unwrap();
        assert_eq!(est.records[0].hits, 9);
        assert_eq!(est.records[1].hits, 5);
        assert_eq!(est.monotonicity_violations, 0);
        let est = tally_grid(&s, &ctx, &fam, |k| Ok(vec![k % 2 == 1, true])).unwrap();
        assert_eq!(est.monotonicity_violations, 5);
    }
}
