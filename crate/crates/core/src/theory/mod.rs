//! Bound formulas and checkers for the inequalities behind the convergence
//! analysis.
//!
//! - [`paths`]: deterministic per-path facts, evaluated at every prefix.
//! - [`descent`]: single-step descent lemmas with exact expectations over a
//!   finite-support noise model.
//! - [`certificate`]: explicit-constant right-hand sides of the upper bounds.
//! - [`lemmas`]: brute-force checks of the scalar lemmas used by the lower bound.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ln, norm1, norm2, norm_inf, norm_p, powf, sqrt};
use crate::stats::summarize;

pub mod certificate;
pub mod descent;
pub mod lemmas;
pub mod paths;

pub use certificate::{rhs_certificate, BoundParams, Theorem};
pub use descent::{check_core_descent, DescentEval};
pub use lemmas::{numeric_lemma_checks, LemmaReport};
pub use paths::{check_path_adagrad, check_path_adagradnorm, CheckSummary, PathReport};

/// Relative slack for the per-path checks.
pub const PATH_SLACK: f64 = 1e-9;
/// Absolute slack for the exact descent checks.
pub const DESCENT_SLACK: f64 = 1e-12;

/// Coordinate-wise (AdaGrad) or global (AdaGrad-Norm) analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    AdaGrad,
    Norm,
}

/// Conjugate exponent `p/(p−1)`.
pub fn conj(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::invalid("p", "conjugate needs p > 1"));
    }
    Ok(p / (p - 1.0))
}

/// The logarithm argument bound `K_T`.
///
/// AdaGrad: `1 + (√2‖σ‖_∞T^{1/p} + 2‖∇f(x₁)‖_∞√T + 2γ√(‖L‖₁‖L‖_∞)T^{3/2})/λ`.
/// Norm: `1 + (√2‖σ‖_pT^{1/p} + 2‖∇f(x₁)‖₂√T + 2γ‖L‖_∞T^{3/2})/λ`.
#[allow(clippy::too_many_arguments)]
pub fn k_t(
    variant: Variant,
    horizon: u64,
    l: &[f64],
    sigma: &[f64],
    p: f64,
    grad_x1: &[f64],
    gamma: f64,
    lambda: f64,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::MissingHypothesis("K_T needs lambda > 0"));
    }
    let t = horizon as f64;
    let (s, g, lt) = match variant {
        Variant::AdaGrad => (
            norm_inf(sigma),
            norm_inf(grad_x1),
            sqrt(norm1(l) * norm_inf(l)),
        ),
        Variant::Norm => (norm_p(sigma, p), norm2(grad_x1), norm_inf(l)),
    };
    Ok(1.0
        + (core::f64::consts::SQRT_2 * s * powf(t, 1.0 / p)
            + 2.0 * g * sqrt(t)
            + 2.0 * gamma * lt * powf(t, 1.5))
            / lambda)
}

/// Proxy parameter `c_i = σ_i (T/D_i)^{1/2 − 1/p̄}`.
pub fn proxy_c(sigma: &[f64], p: f64, horizon: u64, d: &[f64]) -> Result<Vec<f64>> {
    Error::check_dim("D", sigma.len(), d.len())?;
    let e = 0.5 - 1.0 / conj(p)?;
    sigma
        .iter()
        .zip(d)
        .map(|(s, di)| {
            if !(*di > 0.0) {
                return Err(Error::invalid("D", "entries must be positive"));
            }
            Ok(if e == 0.0 {
                *s
            } else {
                s * powf(horizon as f64 / di, e)
            })
        })
        .collect()
}

/// Monte Carlo estimate of `D_{T,i} = 2 ln(1 + (√2σ_iT^{1/p} + E√(2u_{T,i}))/λ)`
/// with the 95% interval from the interval on `E√(2u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DEstimate {
    pub d: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// `u_final[k]` is `u_T` (per coordinate, or a single entry for the norm
/// variant) of the k-th trajectory.
pub fn estimate_d(
    u_final: &[Vec<f64>],
    lambda: f64,
    sigma: &[f64],
    p: f64,
    horizon: u64,
) -> Result<DEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::MissingHypothesis("D_T needs lambda > 0"));
    }
    let Some(first) = u_final.first() else {
        return Err(Error::invalid("trajectories", "need at least one"));
    };
    let d = first.len();
    Error::check_dim("sigma", d, sigma.len())?;
    for u in u_final {
        Error::check_dim("u_T", d, u.len())?;
    }
    let tp = powf(horizon as f64, 1.0 / p);
    let f =
        |s: f64, e: f64| 2.0 * ln(1.0 + (core::f64::consts::SQRT_2 * s * tp + e.max(0.0)) / lambda);
    let mut out = DEstimate {
        d: Vec::with_capacity(d),
        lo: Vec::with_capacity(d),
        hi: Vec::with_capacity(d),
    };
    for i in 0..d {
        let m = summarize(u_final.iter().map(|u| sqrt(2.0 * u[i])));
        out.d.push(f(sigma[i], m.mean));
        out.lo.push(f(sigma[i], m.mean - m.ci95()));
        out.hi.push(f(sigma[i], m.mean + m.ci95()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_examples() {
        assert_eq!(conj(2.0).unwrap(), 2.0);
        assert!((conj(4.0 / 3.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((conj(1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!(conj(1.0).is_err());
    }

    #[test]
    fn k_t_examples() {
        let k = k_t(Variant::AdaGrad, 1, &[1.0], &[0.0], 2.0, &[0.0], 1.0, 1.0).unwrap();
        assert_eq!(k, 3.0);
        let k = k_t(Variant::Norm, 4, &[1.0], &[1.0], 2.0, &[0.0], 0.0, 1.0).unwrap();
        assert!((k - (1.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(k_t(Variant::Norm, 4, &[1.0], &[1.0], 2.0, &[0.0], 1.0, 0.0).is_err());
        let a = k_t(
            Variant::AdaGrad,
            10_000,
            &[1.0],
            &[0.0],
            2.0,
            &[0.0],
            1.0,
            1.0,
        )
        .unwrap();
        let b = k_t(
            Variant::AdaGrad,
            40_000,
            &[1.0],
            &[0.0],
            2.0,
            &[0.0],
            1.0,
            1.0,
        )
        .unwrap();
        assert!(((b - 1.0) / (a - 1.0) - 8.0).abs() < 1e-9);
    }

    #[test]
    fn proxy_c_examples() {
        assert_eq!(
            proxy_c(&[0.7, 2.0], 2.0, 100, &[3.0, 0.1]).unwrap(),
            [0.7, 2.0]
        );
        assert_eq!(proxy_c(&[0.0], 1.5, 100, &[3.0]).unwrap(), [0.0]);
        let c = proxy_c(&[2.0], 4.0 / 3.0, 81, &[1.0]).unwrap();
        assert!((c[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_d_deterministic() {
        let e = estimate_d(&[alloc::vec![0.0]], 1.0, &[0.0], 2.0, 10).unwrap();
        assert_eq!(e.d, [0.0]);
        let e = estimate_d(&[alloc::vec![8.0]], 2.0, &[0.0], 2.0, 10).unwrap();
        assert!((e.d[0] - 2.0 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(e.lo, e.hi);
    }
}
