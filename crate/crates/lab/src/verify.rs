//! Bound certificates against Monte Carlo sweeps, and the per-path checker
//! matrix.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use htopt_core::optimizers::run_keyed;
use htopt_core::theory::{
    check_path_adagrad, check_path_adagradnorm, k_t, rhs_certificate, BoundParams, Theorem, Variant,
};
use htopt_core::{Error as CoreError, StreamKey};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Algo, NoiseSpec, OptimizerCfg, ProblemSpec, RunConfig, TheoremId};
use crate::monte_carlo::{monte_carlo, SweepResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub t: u64,
    pub delta: f64,
    pub delta_star: Option<f64>,
    pub l: Vec<f64>,
    pub sigma: Vec<f64>,
    pub p: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub k_t: Option<f64>,
    pub rhs_value: f64,
    pub lhs_measured: f64,
    pub lhs_ci95: f64,
    pub pass: bool,
    pub constants_provenance: String,
}

fn hypothesis(e: CoreError) -> anyhow::Error {
    match e {
        CoreError::MissingHypothesis(m) => anyhow!("configuration error: {m}"),
        other => other.into(),
    }
}

/// One report per horizon of an existing sweep.
pub fn bound_reports(cfg: &RunConfig, sweep: &SweepResult) -> Result<Vec<BoundReport>> {
    let th = cfg
        .theorem
        .ok_or_else(|| anyhow!("configuration error: no theorem selected"))?;
    let prob = cfg.problem.build()?;
    let nm = cfg.noise.build()?;
    let (gamma, lambda) =
        cfg.optimizer.build()?.adaptive_params().ok_or_else(|| {
            anyhow!("configuration error: certificates need an adaptive optimizer")
        })?;
    let bp = BoundParams::from_problem(&prob, &nm, gamma, lambda)?;
    let core_th = th.core();
    sweep
        .aggregates
        .iter()
        .map(|a| {
            let rhs =
                rhs_certificate(core_th, &bp, a.t).map_err(hypothesis)? * cfg.certificate_scale;
            let k = match core_th {
                Theorem::A1 => Some(Variant::AdaGrad),
                Theorem::D1 => Some(Variant::Norm),
                Theorem::T51 => None,
            }
            .map(|v| k_t(v, a.t, &bp.l, &bp.sigma, bp.p, &bp.grad_x1, gamma, lambda))
            .transpose()?;
            Ok(BoundReport {
                theorem: th,
                t: a.t,
                delta: bp.delta,
                delta_star: bp.delta_star,
                l: bp.l.clone(),
                sigma: bp.sigma.clone(),
                p: bp.p,
                gamma,
                lambda,
                k_t: k,
                rhs_value: rhs,
                lhs_measured: a.metric_mean,
                lhs_ci95: a.metric_ci95,
                pass: a.metric_mean - a.metric_ci95 <= rhs,
                constants_provenance: core_th.provenance().to_string(),
            })
        })
        .collect()
}

/// Runs the sweep and compares it with the selected theorem's certificate.
pub fn verify_bounds(cfg: &RunConfig) -> Result<(SweepResult, Vec<BoundReport>)> {
    let th = cfg
        .theorem
        .ok_or_else(|| anyhow!("configuration error: no theorem selected"))?;
    if th == TheoremId::T51 && cfg.problem.build()?.f_sup().is_none() {
        bail!("configuration error: theorem 5.1 needs a bounded objective");
    }
    let sweep = monte_carlo(cfg)?;
    let reports = bound_reports(cfg, &sweep)?;
    Ok((sweep, reports))
}

/// One trajectory of the checker matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub problem: ProblemSpec,
    pub noise: NoiseSpec,
    pub optimizer: OptimizerCfg,
    pub horizon: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub n_trajectories: usize,
    pub n_failures: usize,
    pub failures: Vec<String>,
    /// Largest `lhs/rhs` per check and algorithm.
    pub worst_ratio: BTreeMap<String, f64>,
    /// Largest `lhs − rhs` per check and algorithm.
    pub worst_gap: BTreeMap<String, f64>,
    pub pass: bool,
}

/// Problems {quadratic, bounded cosine} × noise {zero, discrete3, pareto}
/// × p {1.5, 2} × λ {0.1, 1} × both adaptive algorithms, `seeds` each.
pub fn default_matrix(horizon: u64, seeds: u64) -> Vec<MatrixCell> {
    let problems = [
        ProblemSpec::Quadratic {
            l: vec![1.0, 4.0],
            x_opt: vec![0.0, 0.0],
            x0: Some(vec![3.0, -2.0]),
        },
        ProblemSpec::BoundedCosine {
            amplitude: vec![1.0, 0.5],
            frequency: vec![1.0, 2.0],
            x0: None,
        },
    ];
    let mut out = Vec::new();
    for problem in &problems {
        for p in [1.5, 2.0] {
            let noises = [
                NoiseSpec::Zero { p, dim: 2 },
                NoiseSpec::Discrete3 {
                    p,
                    sigma: vec![1.0, 0.5],
                    scale_a: 2.0,
                },
                NoiseSpec::ParetoSym {
                    p,
                    sigma: vec![1.0, 0.5],
                    alpha: if p < 2.0 { 1.9 } else { 2.5 },
                },
            ];
            for noise in &noises {
                for lambda in [0.1, 1.0] {
                    for algo in [Algo::Adagrad, Algo::Adagradnorm] {
                        for seed in 0..seeds {
                            out.push(MatrixCell {
                                problem: problem.clone(),
                                noise: noise.clone(),
                                optimizer: OptimizerCfg::adaptive(algo, 0.5, lambda),
                                horizon,
                                seed,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// `(check, worst ratio, worst gap)` rows of one trajectory, or its failure.
type CellOutcome = std::result::Result<Vec<(String, f64, f64)>, String>;

pub fn run_matrix(cells: &[MatrixCell], base_seed: u64) -> Result<MatrixReport> {
    let results: Vec<CellOutcome> = cells
        .par_iter()
        .enumerate()
        .map(|(k, c)| -> Result<CellOutcome> {
            let prob = c.problem.build()?;
            let nm = c.noise.build()?;
            let spec = c.optimizer.build()?;
            let key = StreamKey::new(base_seed, k as u64).with_lane(c.seed);
            let tr = run_keyed(&prob, &nm, &spec, c.horizon, key)?;
            let (tag, rep) = match c.optimizer.algo {
                Algo::Adagrad => ("adagrad", check_path_adagrad(&tr, &prob)),
                Algo::Adagradnorm => ("adagradnorm", check_path_adagradnorm(&tr, &prob)),
                other => bail!("no per-path checks for {other:?}"),
            };
            Ok(match rep {
                Ok(r) => Ok(r
                    .checks
                    .iter()
                    .map(|s| (format!("{tag}/{}", s.name), s.worst_ratio, s.worst_gap))
                    .collect()),
                Err(e) => Err(format!("cell {k}: {e}")),
            })
        })
        .collect::<Result<_>>()?;
    let mut worst_ratio = BTreeMap::new();
    let mut worst_gap = BTreeMap::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(v) => {
                for (name, ratio, gap) in v {
                    let e = worst_ratio.entry(name.clone()).or_insert(f64::NEG_INFINITY);
                    *e = f64::max(*e, ratio);
                    let e = worst_gap.entry(name).or_insert(f64::NEG_INFINITY);
                    *e = f64::max(*e, gap);
                }
            }
            Err(msg) => failures.push(msg),
        }
    }
    Ok(MatrixReport {
        n_trajectories: cells.len(),
        n_failures: failures.len(),
        pass: failures.is_empty(),
        failures,
        worst_ratio,
        worst_gap,
    })
}
