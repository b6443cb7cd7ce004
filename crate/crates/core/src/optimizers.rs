//! AdaGrad, AdaGrad-Norm and reference baselines.
//!
//! Both adaptive methods accumulate first and then step with the fresh
//! accumulator: `v_t = v_{t−1} + g_t²`, `x_{t+1} = x_t − γ g_t / (λ + √v_t)`.
//! A coordinate whose numerator and denominator are both zero (`λ = 0`, no
//! gradient seen yet) does not move.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{div_or_zero, norm1, norm2, norm2_sq, sqrt};
use crate::noise::{NoiseKind, NoiseModel};
use crate::problems::Problem;
use crate::rng::StreamKey;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Baseline {
    Sgd { eta: f64 },
    ClippedSgd { eta: f64, tau: f64 },
    NsgdM { eta: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerSpec {
    AdaGrad { gamma: f64, lambda: f64 },
    AdaGradNorm { gamma: f64, lambda: f64 },
    Baseline(Baseline),
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, alloc::format!("{v} must be positive")))
    }
}

fn check_adaptive(gamma: f64, lambda: f64) -> Result<()> {
    positive("gamma", gamma)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::invalid("lambda", "must be finite and >= 0"));
    }
    Ok(())
}

impl OptimizerSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OptimizerSpec::AdaGrad { gamma, lambda }
            | OptimizerSpec::AdaGradNorm { gamma, lambda } => check_adaptive(gamma, lambda),
            OptimizerSpec::Baseline(Baseline::Sgd { eta }) => positive("eta", eta),
            OptimizerSpec::Baseline(Baseline::ClippedSgd { eta, tau }) => {
                positive("eta", eta)?;
                positive("tau", tau)
            }
            OptimizerSpec::Baseline(Baseline::NsgdM { eta, beta }) => {
                positive("eta", eta)?;
                if (0.0..1.0).contains(&beta) {
                    Ok(())
                } else {
                    Err(Error::invalid("beta", "must lie in [0, 1)"))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerSpec::AdaGrad { .. } => "adagrad",
            OptimizerSpec::AdaGradNorm { .. } => "adagradnorm",
            OptimizerSpec::Baseline(Baseline::Sgd { .. }) => "sgd",
            OptimizerSpec::Baseline(Baseline::ClippedSgd { .. }) => "clipped_sgd",
            OptimizerSpec::Baseline(Baseline::NsgdM { .. }) => "nsgd_m",
        }
    }

    /// `(γ, λ)` for the adaptive methods.
    pub fn adaptive_params(&self) -> Option<(f64, f64)> {
        match *self {
            OptimizerSpec::AdaGrad { gamma, lambda }
            | OptimizerSpec::AdaGradNorm { gamma, lambda } => Some((gamma, lambda)),
            OptimizerSpec::Baseline(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaGradState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub gamma: f64,
    pub lambda: f64,
    pub t: u64,
}

impl AdaGradState {
    pub fn new(x0: &[f64], gamma: f64, lambda: f64) -> Result<Self> {
        check_adaptive(gamma, lambda)?;
        Ok(AdaGradState {
            x: x0.to_vec(),
            v: vec![0.0; x0.len()],
            gamma,
            lambda,
            t: 0,
        })
    }

    pub fn step(&mut self, g: &[f64]) -> Result<()> {
        Error::check_dim("g", self.x.len(), g.len())?;
        for ((x, v), gi) in self.x.iter_mut().zip(&mut self.v).zip(g) {
            *v += gi * gi;
            *x -= div_or_zero(self.gamma * gi, self.lambda + sqrt(*v));
        }
        self.t += 1;
        Ok(())
    }

    /// `γ / (λ + √vᵢ)` for the current accumulator.
    pub fn stepsize(&self, i: usize) -> f64 {
        self.gamma / (self.lambda + sqrt(self.v[i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaGradNormState {
    pub x: Vec<f64>,
    pub v: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub t: u64,
}

impl AdaGradNormState {
    pub fn new(x0: &[f64], gamma: f64, lambda: f64) -> Result<Self> {
        check_adaptive(gamma, lambda)?;
        Ok(AdaGradNormState {
            x: x0.to_vec(),
            v: 0.0,
            gamma,
            lambda,
            t: 0,
        })
    }

    pub fn step(&mut self, g: &[f64]) -> Result<()> {
        Error::check_dim("g", self.x.len(), g.len())?;
        self.v += norm2_sq(g);
        let denom = self.lambda + sqrt(self.v);
        for (x, gi) in self.x.iter_mut().zip(g) {
            *x -= div_or_zero(self.gamma * gi, denom);
        }
        self.t += 1;
        Ok(())
    }

    /// `γ_t = γ / (λ + √v_t)`.
    pub fn stepsize(&self) -> f64 {
        self.gamma / (self.lambda + sqrt(self.v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineState {
    pub x: Vec<f64>,
    /// Momentum buffer (used by `nsgd_m` only).
    pub m: Vec<f64>,
    pub kind: Baseline,
    /// Multiplier applied to the direction in the last step.
    pub last_step: f64,
    pub t: u64,
}

impl BaselineState {
    pub fn new(x0: &[f64], kind: Baseline) -> Result<Self> {
        OptimizerSpec::Baseline(kind).validate()?;
        Ok(BaselineState {
            x: x0.to_vec(),
            m: vec![0.0; x0.len()],
            kind,
            last_step: 0.0,
            t: 0,
        })
    }

    pub fn step(&mut self, g: &[f64]) -> Result<()> {
        Error::check_dim("g", self.x.len(), g.len())?;
        match self.kind {
            Baseline::Sgd { eta } => {
                for (x, gi) in self.x.iter_mut().zip(g) {
                    *x -= eta * gi;
                }
                self.last_step = eta;
            }
            Baseline::ClippedSgd { eta, tau } => {
                let n = norm2(g);
                if n > tau {
                    for (x, gi) in self.x.iter_mut().zip(g) {
                        *x -= eta * tau * gi / n;
                    }
                    self.last_step = eta * tau / n;
                } else {
                    for (x, gi) in self.x.iter_mut().zip(g) {
                        *x -= eta * gi;
                    }
                    self.last_step = eta;
                }
            }
            Baseline::NsgdM { eta, beta } => {
                for (m, gi) in self.m.iter_mut().zip(g) {
                    *m = beta * *m + (1.0 - beta) * gi;
                }
                let n = norm2(&self.m);
                if n > 0.0 {
                    for (x, m) in self.x.iter_mut().zip(&self.m) {
                        *x -= eta * m / n;
                    }
                    self.last_step = eta / n;
                } else {
                    self.last_step = 0.0;
                }
            }
        }
        self.t += 1;
        Ok(())
    }
}

/// Any optimizer state behind one interface.
#[derive(Debug, Clone, PartialEq)]
pub enum OptState {
    AdaGrad(AdaGradState),
    AdaGradNorm(AdaGradNormState),
    Baseline(BaselineState),
}

impl OptState {
    pub fn new(spec: &OptimizerSpec, x0: &[f64]) -> Result<Self> {
        spec.validate()?;
        Ok(match *spec {
            OptimizerSpec::AdaGrad { gamma, lambda } => {
                OptState::AdaGrad(AdaGradState::new(x0, gamma, lambda)?)
            }
            OptimizerSpec::AdaGradNorm { gamma, lambda } => {
                OptState::AdaGradNorm(AdaGradNormState::new(x0, gamma, lambda)?)
            }
            OptimizerSpec::Baseline(b) => OptState::Baseline(BaselineState::new(x0, b)?),
        })
    }

    pub fn x(&self) -> &[f64] {
        match self {
            OptState::AdaGrad(s) => &s.x,
            OptState::AdaGradNorm(s) => &s.x,
            OptState::Baseline(s) => &s.x,
        }
    }

    pub fn step(&mut self, g: &[f64]) -> Result<()> {
        match self {
            OptState::AdaGrad(s) => s.step(g),
            OptState::AdaGradNorm(s) => s.step(g),
            OptState::Baseline(s) => s.step(g),
        }
    }

    /// Number of accumulator entries recorded per step.
    pub fn v_width(&self) -> usize {
        match self {
            OptState::AdaGrad(s) => s.v.len(),
            OptState::AdaGradNorm(_) => 1,
            OptState::Baseline(_) => 0,
        }
    }

    /// Number of stepsize entries recorded per step.
    pub fn step_width(&self) -> usize {
        match self {
            OptState::AdaGrad(s) => s.v.len(),
            _ => 1,
        }
    }

    fn write_v(&self, out: &mut [f64]) {
        match self {
            OptState::AdaGrad(s) => out.copy_from_slice(&s.v),
            OptState::AdaGradNorm(s) => out[0] = s.v,
            OptState::Baseline(_) => {}
        }
    }

    fn write_step(&self, out: &mut [f64]) {
        match self {
            OptState::AdaGrad(s) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = s.stepsize(i);
                }
            }
            OptState::AdaGradNorm(s) => out[0] = s.stepsize(),
            OptState::Baseline(s) => out[0] = s.last_step,
        }
    }
}

/// Everything known about step `t`: the iterate `x_t` and its data, the
/// accumulator `v_t` after absorbing `g_t`, and the stepsize used.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord<'a> {
    pub t: u64,
    pub x: &'a [f64],
    pub f: f64,
    pub grad: &'a [f64],
    pub g: &'a [f64],
    pub xi: &'a [f64],
    pub v: &'a [f64],
    pub step: &'a [f64],
}

pub trait Observer {
    fn observe(&mut self, rec: &StepRecord<'_>);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    /// A non-finite `f` or `∇f` was met at iterate `t`.
    Diverged {
        t: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub steps: u64,
    /// `x_{T+1}` (or the offending iterate on divergence).
    pub final_x: Vec<f64>,
    pub final_f: f64,
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Runs `horizon` steps from the problem's default start, feeding each step to
/// `obs`. Noise for step `t` is drawn from `key.at(t)`.
pub fn run_with<O: Observer>(
    problem: &Problem,
    noise: &NoiseModel,
    spec: &OptimizerSpec,
    horizon: u64,
    key: StreamKey,
    obs: &mut O,
) -> Result<RunOutcome> {
    if horizon == 0 {
        return Err(Error::invalid("T", "horizon must be at least 1"));
    }
    let d = problem.dim();
    Error::check_dim("noise", d, noise.dim())?;
    let mut state = OptState::new(spec, problem.x_default())?;
    let mut grad = vec![0.0; d];
    let mut xi = vec![0.0; d];
    let mut g = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut v = vec![0.0; state.v_width()];
    let mut step = vec![0.0; state.step_width()];

    for t in 1..=horizon {
        x.copy_from_slice(state.x());
        let f = problem.f(&x);
        problem.grad_into(&x, &mut grad);
        if !(f.is_finite() && all_finite(&x) && all_finite(&grad)) {
            return Ok(RunOutcome {
                status: RunStatus::Diverged { t },
                steps: t - 1,
                final_x: x,
                final_f: f,
            });
        }
        noise.sample_into(&mut key.at(t), &mut xi);
        for i in 0..d {
            g[i] = grad[i] + xi[i];
        }
        state.step(&g)?;
        state.write_v(&mut v);
        state.write_step(&mut step);
        obs.observe(&StepRecord {
            t,
            x: &x,
            f,
            grad: &grad,
            g: &g,
            xi: &xi,
            v: &v,
            step: &step,
        });
    }
    let final_x = state.x().to_vec();
    let final_f = problem.f(&final_x);
    let status = if final_f.is_finite() && all_finite(&final_x) {
        RunStatus::Completed
    } else {
        RunStatus::Diverged { t: horizon + 1 }
    };
    Ok(RunOutcome {
        status,
        steps: horizon,
        final_x,
        final_f,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub problem: String,
    pub noise_kind: NoiseKind,
    pub p: f64,
    pub sigma: Vec<f64>,
    pub spec: OptimizerSpec,
    pub key: StreamKey,
    pub horizon: u64,
}

/// Full per-step record of a run, stored as flat row-major arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dim: usize,
    pub v_width: usize,
    pub step_width: usize,
    pub f: Vec<f64>,
    pub x: Vec<f64>,
    pub grad: Vec<f64>,
    pub g: Vec<f64>,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    pub step: Vec<f64>,
    pub final_x: Vec<f64>,
    pub final_f: f64,
    pub status: RunStatus,
    pub meta: TrajectoryMeta,
}

struct Recorder<'a> {
    tr: &'a mut Trajectory,
}

impl Observer for Recorder<'_> {
    fn observe(&mut self, r: &StepRecord<'_>) {
        let tr = &mut *self.tr;
        tr.f.push(r.f);
        tr.x.extend_from_slice(r.x);
        tr.grad.extend_from_slice(r.grad);
        tr.g.extend_from_slice(r.g);
        tr.xi.extend_from_slice(r.xi);
        tr.v.extend_from_slice(r.v);
        tr.step.extend_from_slice(r.step);
    }
}

impl Trajectory {
    /// Number of recorded steps.
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    fn row(data: &[f64], w: usize, t: usize) -> &[f64] {
        &data[(t - 1) * w..t * w]
    }

    /// Iterate `x_t`, `t` in `1..=len`.
    pub fn x_at(&self, t: usize) -> &[f64] {
        Self::row(&self.x, self.dim, t)
    }

    pub fn grad_at(&self, t: usize) -> &[f64] {
        Self::row(&self.grad, self.dim, t)
    }

    pub fn g_at(&self, t: usize) -> &[f64] {
        Self::row(&self.g, self.dim, t)
    }

    pub fn xi_at(&self, t: usize) -> &[f64] {
        Self::row(&self.xi, self.dim, t)
    }

    pub fn v_at(&self, t: usize) -> &[f64] {
        Self::row(&self.v, self.v_width, t)
    }

    pub fn step_at(&self, t: usize) -> &[f64] {
        Self::row(&self.step, self.step_width, t)
    }

    /// `f(x_{t+1})` for `t` in `1..=len`, using `final_f` past the end.
    pub fn f_next(&self, t: usize) -> f64 {
        if t < self.len() {
            self.f[t]
        } else {
            self.final_f
        }
    }
}

/// Runs and records the full trajectory.
pub fn run_keyed(
    problem: &Problem,
    noise: &NoiseModel,
    spec: &OptimizerSpec,
    horizon: u64,
    key: StreamKey,
) -> Result<Trajectory> {
    let d = problem.dim();
    let probe = OptState::new(spec, problem.x_default())?;
    let cap = horizon.min(1 << 26) as usize;
    let mut tr = Trajectory {
        dim: d,
        v_width: probe.v_width(),
        step_width: probe.step_width(),
        f: Vec::with_capacity(cap),
        x: Vec::with_capacity(cap * d),
        grad: Vec::with_capacity(cap * d),
        g: Vec::with_capacity(cap * d),
        xi: Vec::with_capacity(cap * d),
        v: Vec::with_capacity(cap * probe.v_width()),
        step: Vec::with_capacity(cap * probe.step_width()),
        final_x: Vec::new(),
        final_f: f64::NAN,
        status: RunStatus::Completed,
        meta: TrajectoryMeta {
            problem: problem.name().to_string(),
            noise_kind: noise.kind(),
            p: noise.p(),
            sigma: noise.sigma().to_vec(),
            spec: *spec,
            key,
            horizon,
        },
    };
    let out = run_with(
        problem,
        noise,
        spec,
        horizon,
        key,
        &mut Recorder { tr: &mut tr },
    )?;
    tr.final_x = out.final_x;
    tr.final_f = out.final_f;
    tr.status = out.status;
    Ok(tr)
}

/// [`run_keyed`] with the stream `(seed, run = 0)`.
pub fn run(
    problem: &Problem,
    noise: &NoiseModel,
    spec: &OptimizerSpec,
    horizon: u64,
    seed: u64,
) -> Result<Trajectory> {
    run_keyed(problem, noise, spec, horizon, StreamKey::new(seed, 0))
}

/// Stationarity measures averaged over the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `(1/T) Σ ‖∇f(x_t)‖₁`
    GradL1Avg,
    /// `(1/T) Σ ‖∇f(x_t)‖₂`
    GradL2Avg,
    /// `(1/T) Σ ‖∇f(x_t)‖₂²`
    GradL2SqAvg,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::GradL1Avg => "grad_l1_avg",
            Metric::GradL2Avg => "grad_l2_avg",
            Metric::GradL2SqAvg => "grad_l2_sq_avg",
        }
    }
}

/// Constant-memory summary of a run: metric sums, `u_T` per coordinate and
/// the final accumulator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSummary {
    pub steps: u64,
    pub sum_l1: f64,
    pub sum_l2: f64,
    pub sum_l2_sq: f64,
    pub u: Vec<f64>,
    pub final_v: Vec<f64>,
}

impl PathSummary {
    pub fn metric(&self, m: Metric) -> f64 {
        let s = match m {
            Metric::GradL1Avg => self.sum_l1,
            Metric::GradL2Avg => self.sum_l2,
            Metric::GradL2SqAvg => self.sum_l2_sq,
        };
        s / self.steps as f64
    }
}

impl Observer for PathSummary {
    fn observe(&mut self, r: &StepRecord<'_>) {
        if self.u.len() != r.grad.len() {
            self.u = vec![0.0; r.grad.len()];
        }
        self.steps += 1;
        self.sum_l1 += norm1(r.grad);
        let sq = norm2_sq(r.grad);
        self.sum_l2 += sqrt(sq);
        self.sum_l2_sq += sq;
        for (u, gi) in self.u.iter_mut().zip(r.grad) {
            *u += gi * gi;
        }
        self.final_v.clear();
        self.final_v.extend_from_slice(r.v);
    }
}

/// Runs without storing the path.
pub fn run_summary(
    problem: &Problem,
    noise: &NoiseModel,
    spec: &OptimizerSpec,
    horizon: u64,
    key: StreamKey,
) -> Result<(PathSummary, RunOutcome)> {
    let mut s = PathSummary::default();
    let out = run_with(problem, noise, spec, horizon, key, &mut s)?;
    Ok((s, out))
}
