//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use htopt_core::optimizers::Metric;
use htopt_core::theory::Theorem;
use htopt_core::{Baseline, NoiseModel, OptimizerSpec, Problem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemSpec {
    Quadratic {
        l: Vec<f64>,
        x_opt: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x0: Option<Vec<f64>>,
    },
    BoundedCosine {
        amplitude: Vec<f64>,
        frequency: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x0: Option<Vec<f64>>,
    },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        let (p, x0) = match self {
            ProblemSpec::Quadratic { l, x_opt, x0 } => (Problem::quadratic(l, x_opt)?, x0),
            ProblemSpec::BoundedCosine {
                amplitude,
                frequency,
                x0,
            } => (Problem::bounded_cosine(amplitude, frequency)?, x0),
        };
        Ok(match x0 {
            Some(x) => p.with_start(x)?,
            None => p,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Zero {
        p: f64,
        dim: usize,
    },
    Discrete3 {
        p: f64,
        sigma: Vec<f64>,
        scale_a: f64,
    },
    ParetoSym {
        p: f64,
        sigma: Vec<f64>,
        alpha: f64,
    },
}

impl NoiseSpec {
    pub fn build(&self) -> Result<NoiseModel> {
        Ok(match self {
            NoiseSpec::Zero { p, dim } => NoiseModel::zero(*p, *dim)?,
            NoiseSpec::Discrete3 { p, sigma, scale_a } => {
                NoiseModel::discrete3(*p, sigma, *scale_a)?
            }
            NoiseSpec::ParetoSym { p, sigma, alpha } => NoiseModel::pareto_sym(*p, sigma, *alpha)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Adagrad,
    Adagradnorm,
    Sgd,
    NsgdM,
    ClippedSgd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerCfg {
    pub algo: Algo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

fn need(v: Option<f64>, name: &str, algo: Algo) -> Result<f64> {
    v.with_context(|| format!("optimizer {algo:?} needs `{name}`"))
}

impl OptimizerCfg {
    pub fn adaptive(algo: Algo, gamma: f64, lambda: f64) -> Self {
        OptimizerCfg {
            algo,
            gamma: Some(gamma),
            lambda: Some(lambda),
            eta: None,
            beta: None,
            tau: None,
        }
    }

    pub fn build(&self) -> Result<OptimizerSpec> {
        let a = self.algo;
        let spec = match a {
            Algo::Adagrad => OptimizerSpec::AdaGrad {
                gamma: need(self.gamma, "gamma", a)?,
                lambda: need(self.lambda, "lambda", a)?,
            },
            Algo::Adagradnorm => OptimizerSpec::AdaGradNorm {
                gamma: need(self.gamma, "gamma", a)?,
                lambda: need(self.lambda, "lambda", a)?,
            },
            Algo::Sgd => OptimizerSpec::Baseline(Baseline::Sgd {
                eta: need(self.eta, "eta", a)?,
            }),
            Algo::NsgdM => OptimizerSpec::Baseline(Baseline::NsgdM {
                eta: need(self.eta, "eta", a)?,
                beta: need(self.beta, "beta", a)?,
            }),
            Algo::ClippedSgd => OptimizerSpec::Baseline(Baseline::ClippedSgd {
                eta: need(self.eta, "eta", a)?,
                tau: need(self.tau, "tau", a)?,
            }),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    GradL1Avg,
    GradL2Avg,
    GradL2SqAvg,
}

impl From<MetricName> for Metric {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::GradL1Avg => Metric::GradL1Avg,
            MetricName::GradL2Avg => Metric::GradL2Avg,
            MetricName::GradL2SqAvg => Metric::GradL2SqAvg,
        }
    }
}

/// Theorem a sweep is compared against; each one fixes the metric and the
/// algorithm it is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    A1,
    #[serde(rename = "51")]
    T51,
    D1,
}

impl TheoremId {
    pub fn core(self) -> Theorem {
        match self {
            TheoremId::A1 => Theorem::A1,
            TheoremId::T51 => Theorem::T51,
            TheoremId::D1 => Theorem::D1,
        }
    }

    pub fn metric(self) -> MetricName {
        match self {
            TheoremId::A1 => MetricName::GradL1Avg,
            TheoremId::T51 | TheoremId::D1 => MetricName::GradL2Avg,
        }
    }

    pub fn algo(self) -> Algo {
        match self {
            TheoremId::A1 => Algo::Adagrad,
            TheoremId::T51 | TheoremId::D1 => Algo::Adagradnorm,
        }
    }
}

fn default_horizons() -> Vec<u64> {
    vec![100, 1_000, 10_000, 100_000]
}

fn default_seeds() -> usize {
    100
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub noise: NoiseSpec,
    pub optimizer: OptimizerCfg,
    #[serde(default = "default_horizons")]
    pub horizons: Vec<u64>,
    #[serde(default = "default_seeds")]
    pub n_seeds: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Per-path checks to run in `verify` (`adagrad`, `adagradnorm`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    pub metric: MetricName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremId>,
    /// Multiplier on the certificate; values below 1 are a sensitivity control.
    #[serde(default = "default_scale")]
    pub certificate_scale: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let s =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seeds == 0 {
            bail!("n_seeds must be at least 1");
        }
        if self.horizons.is_empty() || self.horizons[0] == 0 {
            bail!("horizons must be non-empty and positive");
        }
        if self.horizons.windows(2).any(|w| w[1] <= w[0]) {
            bail!("horizons must be strictly increasing");
        }
        if self.certificate_scale.is_nan() || self.certificate_scale <= 0.0 {
            bail!("certificate_scale must be positive");
        }
        let p = self.problem.build()?;
        let n = self.noise.build()?;
        if p.dim() != n.dim() {
            bail!(
                "problem has dimension {} but noise has {}",
                p.dim(),
                n.dim()
            );
        }
        self.optimizer.build()?;
        if let Some(th) = self.theorem {
            if self.metric != th.metric() {
                bail!(
                    "theorem {:?} is stated for metric {:?}, config uses {:?}",
                    th,
                    th.metric(),
                    self.metric
                );
            }
            if self.optimizer.algo != th.algo() {
                bail!(
                    "theorem {:?} is stated for {:?}, config runs {:?}",
                    th,
                    th.algo(),
                    self.optimizer.algo
                );
            }
        }
        for c in &self.checks {
            if c != "adagrad" && c != "adagradnorm" {
                bail!("unknown check `{c}`");
            }
        }
        Ok(())
    }

    /// Output directory: the configured one, else `$HTOPT_OUT`, else `./out`.
    pub fn output_root(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(output_root)
    }
}

pub fn output_root() -> PathBuf {
    std::env::var_os("HTOPT_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}
