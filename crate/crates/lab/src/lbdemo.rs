//! The stall experiment on the one-dimensional hard instance.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use htopt_core::lower_bound::{eps_conditions, lb_threshold, stall_path, HardParams};
use htopt_core::{GridMode, HardInstance, StallPath, StallStats, StreamKey};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emit::write_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbDemoConfig {
    pub delta: f64,
    pub smoothness: f64,
    pub p: f64,
    pub sigma: f64,
    pub eps: f64,
    pub gamma: f64,
    pub lambda: f64,
    #[serde(default)]
    pub x1: f64,
    /// Defaults to `⌊(T★−1)/(2q)⌋`.
    #[serde(default)]
    pub horizon: Option<u64>,
    pub seeds: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub float_mode: bool,
}

impl LbDemoConfig {
    pub fn params(&self) -> HardParams {
        HardParams {
            delta: self.delta,
            l: self.smoothness,
            p: self.p,
            sigma: self.sigma,
            eps: self.eps,
            x1: self.x1,
            gamma: self.gamma,
            lambda: self.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRow {
    pub seed: u64,
    pub r_total: u64,
    pub stalled: bool,
    pub metric: f64,
    pub on_grid_steps: u64,
    pub off_grid_steps: u64,
    pub grid_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbSummary {
    pub q: f64,
    pub t_star: u64,
    pub t_operational: f64,
    pub t_asymptotic: f64,
    pub eps_conditions: [bool; 3],
    pub horizon: u64,
    pub n_seeds: usize,
    pub n_stalled: usize,
    pub frac_stalled: f64,
    pub frac_ci95: f64,
    pub mean_metric: f64,
    pub metric_ci95: f64,
    pub mean_r: f64,
    pub grid_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbDemoResult {
    pub config: LbDemoConfig,
    pub summary: LbSummary,
    pub seeds: Vec<SeedRow>,
}

pub fn default_horizon(inst: &HardInstance) -> u64 {
    (lb_threshold(inst).0.floor() as u64).max(1)
}

/// Runs all seeds; a stalled path that leaves the grid is an error.
pub fn lb_demo(cfg: &LbDemoConfig) -> Result<LbDemoResult> {
    if cfg.seeds == 0 {
        bail!("seeds must be at least 1");
    }
    let inst = HardInstance::build(cfg.params())?;
    let horizon = cfg.horizon.unwrap_or_else(|| default_horizon(&inst));
    let mode = if cfg.float_mode {
        GridMode::Float
    } else {
        GridMode::Lattice
    };
    let paths: Vec<StallPath> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|s| stall_path(&inst, horizon, StreamKey::new(cfg.base_seed, s), mode))
        .collect();
    let st = StallStats::aggregate(horizon, &paths);
    if st.grid_violations > 0 {
        bail!(
            "theory falsified: {} stalled path(s) left the grid at T = {horizon}",
            st.grid_violations
        );
    }
    let (t_op, t_asym) = lb_threshold(&inst);
    Ok(LbDemoResult {
        config: cfg.clone(),
        summary: LbSummary {
            q: inst.q,
            t_star: inst.t_star,
            t_operational: t_op,
            t_asymptotic: t_asym,
            eps_conditions: eps_conditions(&inst),
            horizon,
            n_seeds: st.n_seeds,
            n_stalled: st.n_stalled,
            frac_stalled: st.frac_stalled,
            frac_ci95: st.frac_ci95,
            mean_metric: st.mean_metric,
            metric_ci95: st.metric_ci95,
            mean_r: st.mean_r,
            grid_violations: st.grid_violations,
        },
        seeds: paths
            .iter()
            .enumerate()
            .map(|(s, p)| SeedRow {
                seed: s as u64,
                r_total: p.r_total,
                stalled: p.stalled,
                metric: p.metric,
                on_grid_steps: p.on_grid_steps,
                off_grid_steps: p.off_grid_steps,
                grid_violation: p.grid_violation,
            })
            .collect(),
    })
}

/// Writes `lb_seeds.csv` and `lb_demo.json` under `dir`.
pub fn emit_lb(dir: &Path, res: &LbDemoResult) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join("lb_seeds.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    for row in &res.seeds {
        w.serialize(row)?;
    }
    if res.seeds.is_empty() {
        w.write_record([
            "seed",
            "r_total",
            "stalled",
            "metric",
            "on_grid_steps",
            "off_grid_steps",
            "grid_violation",
        ])?;
    }
    w.flush()?;
    let json_path = dir.join("lb_demo.json");
    write_json(&json_path, res)?;
    Ok(vec![csv_path, json_path])
}
