//! Zero-mean coordinate-wise noise with a certified p-th moment.
//!
//! Every model satisfies `E|ξᵢ|^p = σᵢ^p` in closed form. `discrete3` has a
//! finite support that [`NoiseModel::enumerate_support`] lists exhaustively, so
//! conditional expectations can be computed exactly instead of sampled.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::powf;
use crate::rng::StepRng;

/// Largest dimension for which the product support is enumerated.
pub const MAX_ENUM_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    Zero,
    /// `ξᵢ ∈ {−aᵢ, 0, aᵢ}` with `aᵢ = scale_a·σᵢ` and `P(±aᵢ) = ρ/2`,
    /// `ρ = scale_a^{−p}`.
    Discrete3 {
        scale_a: f64,
    },
    /// `ξᵢ = s·σ̃ᵢ·U^{−1/α}`, `σ̃ᵢ = σᵢ(1 − p/α)^{1/p}`.
    ParetoSym {
        alpha: f64,
    },
}

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKind::Zero => "zero",
            NoiseKind::Discrete3 { .. } => "discrete3",
            NoiseKind::ParetoSym { .. } => "pareto_sym",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    p: f64,
    sigma: Vec<f64>,
    kind: NoiseKind,
}

/// One point of a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub xi: Vec<f64>,
    pub prob: f64,
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p <= 2.0 {
        Ok(())
    } else {
        Err(Error::invalid("p", alloc::format!("{p} is outside (1, 2]")))
    }
}

fn check_sigma(sigma: &[f64]) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::invalid("sigma", "must be non-empty"));
    }
    if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::invalid("sigma", "entries must be finite and >= 0"));
    }
    Ok(())
}

impl NoiseModel {
    pub fn zero(p: f64, dim: usize) -> Result<Self> {
        check_p(p)?;
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        Ok(NoiseModel {
            p,
            sigma: vec![0.0; dim],
            kind: NoiseKind::Zero,
        })
    }

    pub fn discrete3(p: f64, sigma: &[f64], scale_a: f64) -> Result<Self> {
        check_p(p)?;
        check_sigma(sigma)?;
        if !(scale_a >= 1.0 && scale_a.is_finite()) {
            return Err(Error::invalid(
                "scale_a",
                alloc::format!("{scale_a} < 1 gives a probability above 1"),
            ));
        }
        Ok(NoiseModel {
            p,
            sigma: sigma.to_vec(),
            kind: NoiseKind::Discrete3 { scale_a },
        })
    }

    pub fn pareto_sym(p: f64, sigma: &[f64], alpha: f64) -> Result<Self> {
        check_p(p)?;
        check_sigma(sigma)?;
        if !(alpha > p && alpha.is_finite()) {
            return Err(Error::invalid(
                "alpha",
                alloc::format!("{alpha} <= p = {p}: the p-th moment diverges"),
            ));
        }
        Ok(NoiseModel {
            p,
            sigma: sigma.to_vec(),
            kind: NoiseKind::ParetoSym { alpha },
        })
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn is_finite_support(&self) -> bool {
        !matches!(self.kind, NoiseKind::ParetoSym { .. })
    }

    /// True when `E ξᵢ² = ∞` for some coordinate with `σᵢ > 0`.
    pub fn infinite_variance(&self) -> bool {
        match self.kind {
            NoiseKind::ParetoSym { alpha } => alpha <= 2.0 && self.sigma.iter().any(|s| *s > 0.0),
            _ => false,
        }
    }

    /// Pareto scale `σ̃ᵢ`, or the jump size `aᵢ` for `discrete3`.
    pub fn scale(&self, i: usize) -> f64 {
        match self.kind {
            NoiseKind::Zero => 0.0,
            NoiseKind::Discrete3 { scale_a } => scale_a * self.sigma[i],
            NoiseKind::ParetoSym { alpha } => {
                self.sigma[i] * powf(1.0 - self.p / alpha, 1.0 / self.p)
            }
        }
    }

    /// Probability of a non-zero outcome per coordinate for `discrete3`.
    pub fn jump_probability(&self) -> Option<f64> {
        match self.kind {
            NoiseKind::Discrete3 { scale_a } => Some(powf(scale_a, -self.p)),
            _ => None,
        }
    }

    /// Closed-form `E|ξᵢ|^p`, evaluated from the model's own parameters.
    pub fn certified_moment(&self, i: usize) -> f64 {
        let s = self.scale(i);
        match self.kind {
            NoiseKind::Zero => 0.0,
            NoiseKind::Discrete3 { scale_a } => {
                if self.sigma[i] == 0.0 {
                    0.0
                } else {
                    powf(scale_a, -self.p) * powf(s, self.p)
                }
            }
            NoiseKind::ParetoSym { alpha } => powf(s, self.p) * alpha / (alpha - self.p),
        }
    }

    /// Closed-form `E|ξᵢ|^{2p}` when finite, for Monte Carlo standard errors.
    pub fn moment_2p(&self, i: usize) -> Option<f64> {
        let s = self.scale(i);
        let q = 2.0 * self.p;
        match self.kind {
            NoiseKind::Zero => Some(0.0),
            NoiseKind::Discrete3 { scale_a } => Some(if self.sigma[i] == 0.0 {
                0.0
            } else {
                powf(scale_a, -self.p) * powf(s, q)
            }),
            NoiseKind::ParetoSym { alpha } => {
                if alpha > q {
                    Some(powf(s, q) * alpha / (alpha - q))
                } else if self.sigma[i] == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }

    /// One draw of ξ into `out`.
    pub fn sample_into(&self, rng: &mut StepRng, out: &mut [f64]) {
        match self.kind {
            NoiseKind::Zero => out.iter_mut().for_each(|v| *v = 0.0),
            NoiseKind::Discrete3 { scale_a } => {
                let rho = powf(scale_a, -self.p);
                for (i, o) in out.iter_mut().enumerate() {
                    let u = rng.uniform();
                    let a = scale_a * self.sigma[i];
                    *o = if a == 0.0 {
                        0.0
                    } else if u < 0.5 * rho {
                        -a
                    } else if u < rho {
                        a
                    } else {
                        0.0
                    };
                }
            }
            NoiseKind::ParetoSym { alpha } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let s = rng.sign();
                    let u = rng.uniform_open_closed();
                    let scale = self.scale(i);
                    *o = if scale == 0.0 {
                        0.0
                    } else {
                        s * scale * powf(u, -1.0 / alpha)
                    };
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut StepRng) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out);
        out
    }

    /// Every outcome of the product measure with its probability.
    ///
    /// Coordinates with `σᵢ = 0` contribute a single point mass, so the list
    /// has `3^k` entries where `k` counts the noisy coordinates.
    pub fn enumerate_support(&self) -> Result<Vec<Outcome>> {
        let marginals: Vec<Vec<(f64, f64)>> = match self.kind {
            NoiseKind::ParetoSym { .. } => {
                return Err(Error::Unsupported(
                    "support enumeration needs a finite-support noise kind",
                ))
            }
            NoiseKind::Zero => vec![vec![(0.0, 1.0)]; self.dim()],
            NoiseKind::Discrete3 { scale_a } => {
                if self.dim() > MAX_ENUM_DIM {
                    return Err(Error::SupportTooLarge {
                        dim: self.dim(),
                        cap: MAX_ENUM_DIM,
                    });
                }
                let rho = powf(scale_a, -self.p);
                self.sigma
                    .iter()
                    .map(|s| {
                        let a = scale_a * s;
                        if a == 0.0 {
                            vec![(0.0, 1.0)]
                        } else {
                            vec![(-a, 0.5 * rho), (0.0, 1.0 - rho), (a, 0.5 * rho)]
                        }
                    })
                    .collect()
            }
        };
        let mut out = vec![Outcome {
            xi: Vec::with_capacity(self.dim()),
            prob: 1.0,
        }];
        for m in &marginals {
            let mut next = Vec::with_capacity(out.len() * m.len());
            for o in &out {
                for &(v, pr) in m {
                    if pr == 0.0 {
                        continue;
                    }
                    let mut xi = o.xi.clone();
                    xi.push(v);
                    next.push(Outcome {
                        xi,
                        prob: o.prob * pr,
                    });
                }
            }
            out = next;
        }
        Ok(out)
    }
}
