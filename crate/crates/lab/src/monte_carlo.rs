//! Seeded Monte Carlo sweeps over horizons × seeds.

use anyhow::{bail, Result};
use htopt_core::optimizers::{run_summary, Metric};
use htopt_core::stats::summarize;
use htopt_core::{RunStatus, StreamKey};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::fit::{fit_rate, Fit};

/// One `(T, seed)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub t: u64,
    pub seed: u64,
    /// `None` when the run diverged.
    pub metric: Option<f64>,
    pub final_v: Vec<f64>,
    /// `u_T = Σ_t (∇f(x_t))²` per coordinate.
    pub u: Vec<f64>,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub t: u64,
    pub n_seeds: usize,
    pub n_diverged: usize,
    pub metric_mean: f64,
    pub metric_se: f64,
    pub metric_ci95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: RunConfig,
    pub cells: Vec<Cell>,
    pub aggregates: Vec<Aggregate>,
    pub fit: Option<Fit>,
}

/// Stream for horizon index `ti` and seed index `s`.
pub fn cell_key(base_seed: u64, ti: usize, s: usize) -> StreamKey {
    StreamKey::new(base_seed, ti as u64).with_lane(s as u64)
}

pub fn monte_carlo(cfg: &RunConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let prob = cfg.problem.build()?;
    let nm = cfg.noise.build()?;
    let spec = cfg.optimizer.build()?;
    let metric: Metric = cfg.metric.into();
    let jobs: Vec<(usize, usize)> = (0..cfg.horizons.len())
        .flat_map(|ti| (0..cfg.n_seeds).map(move |s| (ti, s)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(ti, s)| -> Result<Cell> {
            let t = cfg.horizons[ti];
            let (sum, out) = run_summary(&prob, &nm, &spec, t, cell_key(cfg.base_seed, ti, s))?;
            let diverged = !matches!(out.status, RunStatus::Completed);
            Ok(Cell {
                t,
                seed: s as u64,
                metric: (!diverged).then(|| sum.metric(metric)),
                final_v: sum.final_v,
                u: sum.u,
                diverged,
            })
        })
        .collect::<Result<_>>()?;
    let aggregates = aggregate(&cfg.horizons, &cells)?;
    let pts: Vec<(f64, f64)> = aggregates
        .iter()
        .map(|a| (a.t as f64, a.metric_mean))
        .collect();
    let fit = if pts.len() >= 3 {
        fit_rate(&pts).ok()
    } else {
        None
    };
    Ok(SweepResult {
        config: cfg.clone(),
        cells,
        aggregates,
        fit,
    })
}

pub fn aggregate(horizons: &[u64], cells: &[Cell]) -> Result<Vec<Aggregate>> {
    horizons
        .iter()
        .map(|&t| {
            let row: Vec<&Cell> = cells.iter().filter(|c| c.t == t).collect();
            let n_diverged = row.iter().filter(|c| c.diverged).count();
            if n_diverged == row.len() {
                bail!("every seed diverged at T = {t}");
            }
            let s = summarize(row.iter().filter_map(|c| c.metric));
            Ok(Aggregate {
                t,
                n_seeds: row.len(),
                n_diverged,
                metric_mean: s.mean,
                metric_se: s.se,
                metric_ci95: s.ci95(),
            })
        })
        .collect()
}
