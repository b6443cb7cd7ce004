//! One-step descent inequalities with exact conditional expectations.
//!
//! Given a state `(x_t, v_{t−1})`, every outcome of a finite-support noise
//! model is pushed through one optimizer step, so both sides are computed
//! without sampling. The proxy accumulator is
//! `w_t = v_{t−1} + (∇f(x_t))² + c²` (coordinate-wise) or
//! `v_{t−1} + ‖∇f(x_t)‖² + c²` (norm).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{div_or_zero, norm2_sq, norm_inf, norm_p, powf, sqrt};
use crate::noise::NoiseModel;
use crate::problems::Problem;

use super::{conj, Variant, DESCENT_SLACK};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentEval {
    pub lhs: f64,
    pub rhs: f64,
    /// `E[f(x_t) − f(x_{t+1})]`.
    pub decrease: f64,
    pub pass: bool,
}

/// `σ²/c · e^{2/p̄}`, dropped when `σ = 0` and infinite when only `c = 0`.
fn noise_term(sigma_sq: f64, c: f64, e: f64, pbar: f64) -> f64 {
    if sigma_sq == 0.0 {
        0.0
    } else {
        sigma_sq / c * powf(e, 2.0 / pbar)
    }
}

/// Evaluates the single-step descent lemma at `x` with previous accumulator
/// `v_prev` (length `d` for AdaGrad, 1 for the norm variant) and proxy `c` of
/// the same length.
#[allow(clippy::too_many_arguments)]
pub fn check_core_descent(
    variant: Variant,
    prob: &Problem,
    nm: &NoiseModel,
    x: &[f64],
    v_prev: &[f64],
    gamma: f64,
    lambda: f64,
    c: &[f64],
) -> Result<DescentEval> {
    let d = prob.dim();
    Error::check_dim("x", d, x.len())?;
    Error::check_dim("noise", d, nm.dim())?;
    let w = match variant {
        Variant::AdaGrad => d,
        Variant::Norm => 1,
    };
    Error::check_dim("v_prev", w, v_prev.len())?;
    Error::check_dim("c", w, c.len())?;
    if c.iter().chain(v_prev).any(|v| !(*v >= 0.0)) {
        return Err(Error::invalid("c / v_prev", "must be non-negative"));
    }
    if !(gamma > 0.0 && lambda >= 0.0) {
        return Err(Error::invalid(
            "gamma / lambda",
            "need gamma > 0, lambda >= 0",
        ));
    }
    let pbar = conj(nm.p())?;
    let support = nm.enumerate_support()?;
    let grad = prob.grad(x);
    let fx = prob.f(x);

    let mut decrease = 0.0;
    let mut e = alloc::vec![0.0; w];
    let mut g = alloc::vec![0.0; d];
    let mut x1 = alloc::vec![0.0; d];
    for o in &support {
        for i in 0..d {
            g[i] = grad[i] + o.xi[i];
        }
        match variant {
            Variant::AdaGrad => {
                for i in 0..d {
                    let v = v_prev[i] + g[i] * g[i];
                    x1[i] = x[i] - div_or_zero(gamma * g[i], lambda + sqrt(v));
                    e[i] += o.prob * div_or_zero(g[i] * g[i], lambda * lambda + v);
                }
            }
            Variant::Norm => {
                let gs = norm2_sq(&g);
                let v = v_prev[0] + gs;
                let rv = sqrt(v);
                for i in 0..d {
                    x1[i] = x[i] - div_or_zero(gamma * g[i], lambda + rv);
                }
                e[0] += o.prob * div_or_zero(gs, lambda * lambda + v);
            }
        }
        decrease += o.prob * (fx - prob.f(&x1));
    }

    let l = prob.smoothness();
    let sigma = nm.sigma();
    let (lhs, rhs) = match variant {
        Variant::AdaGrad => {
            let mut lhs = 0.0;
            let mut rhs = decrease;
            for i in 0..d {
                let wi = v_prev[i] + grad[i] * grad[i] + c[i] * c[i];
                lhs += div_or_zero(grad[i] * grad[i], lambda + sqrt(wi));
                rhs += gamma * noise_term(sigma[i] * sigma[i], c[i], e[i], pbar);
                rhs += gamma * (c[i] + 0.5 * gamma * l[i]) * e[i];
            }
            (0.5 * gamma * lhs, rhs)
        }
        Variant::Norm => {
            let gn = norm2_sq(&grad);
            let wi = v_prev[0] + gn + c[0] * c[0];
            let s = norm_p(sigma, nm.p());
            let lhs = 0.5 * gamma * div_or_zero(gn, lambda + sqrt(wi));
            let rhs = decrease
                + gamma * noise_term(s * s, c[0], e[0], pbar)
                + gamma * (c[0] + 0.5 * gamma * norm_inf(l)) * e[0];
            (lhs, rhs)
        }
    };
    Ok(DescentEval {
        lhs,
        rhs,
        decrease,
        pass: lhs <= rhs + DESCENT_SLACK,
    })
}

/// Per-coordinate proxy vector of constant value, for the given variant.
pub fn uniform_c(variant: Variant, dim: usize, c: f64) -> Vec<f64> {
    match variant {
        Variant::AdaGrad => alloc::vec![c; dim],
        Variant::Norm => alloc::vec![c],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamKey;

    #[test]
    fn zero_noise_reduces_to_descent_lemma() {
        let p = Problem::quadratic(&[1.0, 4.0], &[0.0, 0.0]).unwrap();
        let nm = NoiseModel::zero(2.0, 2).unwrap();
        for variant in [Variant::AdaGrad, Variant::Norm] {
            let c = uniform_c(variant, 2, 0.0);
            let v = uniform_c(variant, 2, 0.3);
            let r = check_core_descent(variant, &p, &nm, &[1.0, -2.0], &v, 0.7, 0.5, &c).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.decrease > 0.0);
        }
    }

    #[test]
    fn sigma_without_c_is_vacuous() {
        let p = Problem::quadratic(&[1.0], &[0.0]).unwrap();
        let nm = NoiseModel::discrete3(2.0, &[1.0], 2.0).unwrap();
        let r = check_core_descent(Variant::AdaGrad, &p, &nm, &[1.0], &[0.0], 1.0, 1.0, &[0.0])
            .unwrap();
        assert_eq!(r.rhs, f64::INFINITY);
        assert!(r.pass);
    }

    #[test]
    fn random_states_and_c_grid() {
        let p = Problem::bounded_cosine(&[1.0], &[2.0]).unwrap();
        let nm = NoiseModel::discrete3(1.5, &[0.8], 1.7).unwrap();
        let key = StreamKey::new(5, 0);
        for k in 0..200 {
            let mut r = key.at(k);
            let x = [10.0 * (r.uniform() - 0.5)];
            let v = [5.0 * r.uniform()];
            let gamma = 0.05 + 2.0 * r.uniform();
            let lambda = 2.0 * r.uniform();
            for c in [0.01, 0.1, 1.0, 10.0] {
                for variant in [Variant::AdaGrad, Variant::Norm] {
                    let e =
                        check_core_descent(variant, &p, &nm, &x, &v, gamma, lambda, &[c]).unwrap();
                    assert!(e.pass, "{variant:?} x={x:?} c={c} {e:?}");
                }
            }
        }
    }

    #[test]
    fn continuous_noise_unsupported() {
        let p = Problem::quadratic(&[1.0], &[0.0]).unwrap();
        let nm = NoiseModel::pareto_sym(1.5, &[1.0], 3.0).unwrap();
        assert!(matches!(
            check_core_descent(Variant::Norm, &p, &nm, &[1.0], &[0.0], 1.0, 1.0, &[1.0]),
            Err(Error::Unsupported(_))
        ));
    }
}
