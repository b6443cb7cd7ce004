//! Deterministic inequalities that hold along every AdaGrad / AdaGrad-Norm path.
//!
//! Each check is evaluated at every prefix `t ≤ T`. A check fails when
//! `lhs > rhs + 1e-9·max(scale, |rhs|)`, where `scale` is the sum of absolute
//! values of the accumulated terms.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{div_or_zero, fabs, log1p, norm1, norm2_sq, norm_inf, powf, sqrt};
use crate::optimizers::{OptimizerSpec, Trajectory};
use crate::problems::Problem;

use super::PATH_SLACK;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub evaluations: u64,
    /// Largest `lhs − rhs` seen (non-positive unless within slack).
    pub worst_gap: f64,
    /// Largest `lhs / rhs` over evaluations with `rhs > 0`.
    pub worst_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathReport {
    pub steps: usize,
    pub checks: Vec<CheckSummary>,
}

impl PathReport {
    pub fn get(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Check {
    s: CheckSummary,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            s: CheckSummary {
                name,
                evaluations: 0,
                worst_gap: f64::NEG_INFINITY,
                worst_ratio: 0.0,
            },
        }
    }

    fn eval(&mut self, step: u64, lhs: f64, rhs: f64, scale: f64) -> Result<()> {
        self.s.evaluations += 1;
        let gap = lhs - rhs;
        if gap > self.s.worst_gap {
            self.s.worst_gap = gap;
        }
        if rhs > 0.0 && lhs / rhs > self.s.worst_ratio {
            self.s.worst_ratio = lhs / rhs;
        }
        let tol = PATH_SLACK * scale.max(fabs(rhs));
        if !(gap <= tol) {
            return Err(Error::TheoryFalsified {
                check: self.s.name,
                step,
                lhs,
                rhs,
            });
        }
        Ok(())
    }
}

fn params(tr: &Trajectory, want_norm: bool) -> Result<(f64, f64)> {
    match (tr.meta.spec, want_norm) {
        (OptimizerSpec::AdaGrad { gamma, lambda }, false) => Ok((gamma, lambda)),
        (OptimizerSpec::AdaGradNorm { gamma, lambda }, true) => Ok((gamma, lambda)),
        _ => Err(Error::invalid(
            "trajectory",
            "optimizer does not match the checked algorithm",
        )),
    }
}

/// `‖ξ‖_p^p` accumulated per coordinate.
fn xi_pow(xi: &[f64], p: f64, acc: &mut [f64]) {
    for (a, x) in acc.iter_mut().zip(xi) {
        *a += powf(fabs(*x), p);
    }
}

/// Checks for an AdaGrad-Norm path:
///
/// - `telescoping`: `Σ (f(x_s) − f(x_{s+1}))(λ+√v_s)/γ ≤ λΔ★/γ + (Δ★/γ)√v_t`
///   (only when the problem has `f_sup`);
/// - `weighted_sum`: `Σ γ_s‖g_s‖² ≤ 2γ√v_t`;
/// - `log_potential`: `Σ ‖g_s‖²/(λ²+v_s) ≤ ln(1+v_t/λ²)` (only when `λ > 0`);
/// - `v_bound`: `√v_t ≤ √2(Σ_s‖ξ_s‖_p^p)^{1/p} + √(2u_t)`;
/// - `grad_growth`: `‖∇f(x_t) − ∇f(x₁)‖₂ ≤ γ‖L‖_∞(t−1)`.
pub fn check_path_adagradnorm(tr: &Trajectory, prob: &Problem) -> Result<PathReport> {
    let (gamma, lambda) = params(tr, true)?;
    Error::check_dim("trajectory", prob.dim(), tr.dim)?;
    let p = tr.meta.p;
    let l_inf = norm_inf(prob.smoothness());
    let delta_star = prob.f_sup().map(|s| s - prob.f_star());

    let mut tele = delta_star.map(|_| Check::new("telescoping"));
    let mut wsum = Check::new("weighted_sum");
    let mut logp = (lambda > 0.0).then(|| Check::new("log_potential"));
    let mut vb = Check::new("v_bound");
    let mut growth = Check::new("grad_growth");

    let (mut s_tele, mut a_tele) = (0.0, 0.0);
    let mut s_w = 0.0;
    let mut s_log = 0.0;
    let mut u = 0.0;
    let mut xi_acc = [0.0];
    let grad1 = tr.grad_at(1).to_vec();
    let mut diff = Vec::with_capacity(tr.dim);

    for t in 1..=tr.len() {
        let step = t as u64;
        let v = tr.v_at(t)[0];
        let g_sq = norm2_sq(tr.g_at(t));
        let rv = sqrt(v);

        if let (Some(c), Some(ds)) = (tele.as_mut(), delta_star) {
            let term = (tr.f[t - 1] - tr.f_next(t)) * (lambda + rv) / gamma;
            s_tele += term;
            a_tele += fabs(term);
            c.eval(step, s_tele, lambda * ds / gamma + ds / gamma * rv, a_tele)?;
        }

        s_w += gamma * div_or_zero(g_sq, lambda + rv);
        wsum.eval(step, s_w, 2.0 * gamma * rv, s_w)?;

        if let Some(c) = logp.as_mut() {
            s_log += g_sq / (lambda * lambda + v);
            c.eval(step, s_log, log1p(v / (lambda * lambda)), s_log)?;
        }

        u += norm2_sq(tr.grad_at(t));
        xi_acc[0] += tr.xi_at(t).iter().map(|x| powf(fabs(*x), p)).sum::<f64>();
        let rhs = core::f64::consts::SQRT_2 * powf(xi_acc[0], 1.0 / p) + sqrt(2.0 * u);
        vb.eval(step, rv, rhs, rv)?;

        diff.clear();
        diff.extend(tr.grad_at(t).iter().zip(&grad1).map(|(a, b)| a - b));
        let lhs = sqrt(norm2_sq(&diff));
        growth.eval(step, lhs, gamma * l_inf * (t - 1) as f64, lhs)?;
    }

    let mut checks = Vec::new();
    checks.extend(tele.map(|c| c.s));
    checks.push(wsum.s);
    checks.extend(logp.map(|c| c.s));
    checks.push(vb.s);
    checks.push(growth.s);
    Ok(PathReport {
        steps: tr.len(),
        checks,
    })
}

/// Coordinate-wise checks for an AdaGrad path, for every `i`:
///
/// - `weighted_sum`: `Σ γ g_{s,i}²/(λ+√v_{s,i}) ≤ 2γ√v_{t,i}`;
/// - `log_potential`: `Σ g_{s,i}²/(λ²+v_{s,i}) ≤ ln(1+v_{t,i}/λ²)` (only when `λ > 0`);
/// - `v_bound`: `√v_{t,i} ≤ √2(Σ_s|ξ_{s,i}|^p)^{1/p} + √(2u_{t,i})`;
/// - `grad_growth`: `|∇_if(x_t)| ≤ |∇_if(x₁)| + γ√(L_i‖L‖₁)(t−1)`.
pub fn check_path_adagrad(tr: &Trajectory, prob: &Problem) -> Result<PathReport> {
    let (gamma, lambda) = params(tr, false)?;
    let d = prob.dim();
    Error::check_dim("trajectory", d, tr.dim)?;
    let p = tr.meta.p;
    let l = prob.smoothness();
    let l1 = norm1(l);

    let mut wsum = Check::new("weighted_sum");
    let mut logp = (lambda > 0.0).then(|| Check::new("log_potential"));
    let mut vb = Check::new("v_bound");
    let mut growth = Check::new("grad_growth");

    let mut s_w = alloc::vec![0.0; d];
    let mut s_log = alloc::vec![0.0; d];
    let mut u = alloc::vec![0.0; d];
    let mut xi_acc = alloc::vec![0.0; d];
    let grad1 = tr.grad_at(1).to_vec();

    for t in 1..=tr.len() {
        let step = t as u64;
        let v = tr.v_at(t);
        let g = tr.g_at(t);
        let grad = tr.grad_at(t);
        xi_pow(tr.xi_at(t), p, &mut xi_acc);
        for i in 0..d {
            let rv = sqrt(v[i]);
            let g2 = g[i] * g[i];

            s_w[i] += gamma * div_or_zero(g2, lambda + rv);
            wsum.eval(step, s_w[i], 2.0 * gamma * rv, s_w[i])?;

            if let Some(c) = logp.as_mut() {
                s_log[i] += g2 / (lambda * lambda + v[i]);
                c.eval(step, s_log[i], log1p(v[i] / (lambda * lambda)), s_log[i])?;
            }

            u[i] += grad[i] * grad[i];
            let rhs = core::f64::consts::SQRT_2 * powf(xi_acc[i], 1.0 / p) + sqrt(2.0 * u[i]);
            vb.eval(step, rv, rhs, rv)?;

            let bound = fabs(grad1[i]) + gamma * sqrt(l[i] * l1) * (t - 1) as f64;
            growth.eval(step, fabs(grad[i]), bound, fabs(grad[i]))?;
        }
    }

    let mut checks = alloc::vec![wsum.s];
    checks.extend(logp.map(|c| c.s));
    checks.push(vb.s);
    checks.push(growth.s);
    Ok(PathReport {
        steps: tr.len(),
        checks,
    })
}
