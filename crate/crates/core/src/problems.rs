//! Synthetic smooth objectives with analytic gradients.
//!
//! Every [`Problem`] carries a declared coordinate smoothness vector `L`, the
//! infimum `f_star` and, when the objective is bounded, the supremum `f_sup`.
//! [`check_assumptions`] tests the declarations against the actual function.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, fabs, sin};
use crate::rng::{domain, StreamKey};

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `½ Σ curvatureᵢ (xᵢ − x_optᵢ)²`.
    Quadratic {
        curvature: Vec<f64>,
        x_opt: Vec<f64>,
    },
    /// `Σ Aᵢ (1 − cos(aᵢ xᵢ))`.
    BoundedCosine {
        amplitude: Vec<f64>,
        frequency: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    name: String,
    objective: Objective,
    smoothness: Vec<f64>,
    f_star: f64,
    f_sup: Option<f64>,
    x_default: Vec<f64>,
}

fn require_positive(name: &'static str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invalid(name, "must be non-empty"));
    }
    match v.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        Some(i) => Err(Error::invalid(
            name,
            alloc::format!("entry {i} is {} but must be positive", v[i]),
        )),
        None => Ok(()),
    }
}

impl Problem {
    pub fn quadratic(l: &[f64], x_opt: &[f64]) -> Result<Self> {
        require_positive("L", l)?;
        Error::check_dim("x_opt", l.len(), x_opt.len())?;
        if x_opt.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("x_opt", "must be finite"));
        }
        Ok(Problem {
            name: "quadratic".to_string(),
            objective: Objective::Quadratic {
                curvature: l.to_vec(),
                x_opt: x_opt.to_vec(),
            },
            smoothness: l.to_vec(),
            f_star: 0.0,
            f_sup: None,
            x_default: x_opt.iter().map(|x| x + 1.0).collect(),
        })
    }

    pub fn bounded_cosine(amplitude: &[f64], frequency: &[f64]) -> Result<Self> {
        require_positive("A", amplitude)?;
        require_positive("a", frequency)?;
        Error::check_dim("a", amplitude.len(), frequency.len())?;
        let smoothness = amplitude
            .iter()
            .zip(frequency)
            .map(|(a, w)| a * w * w)
            .collect();
        // start at the steepest point of each coordinate
        let x_default = frequency
            .iter()
            .map(|w| core::f64::consts::FRAC_PI_2 / w)
            .collect();
        Ok(Problem {
            name: "bounded_cosine".to_string(),
            f_sup: Some(2.0 * amplitude.iter().sum::<f64>()),
            objective: Objective::BoundedCosine {
                amplitude: amplitude.to_vec(),
                frequency: frequency.to_vec(),
            },
            smoothness,
            f_star: 0.0,
            x_default,
        })
    }

    /// Replaces the declared smoothness vector without touching the objective.
    pub fn with_smoothness(mut self, l: &[f64]) -> Result<Self> {
        require_positive("L", l)?;
        Error::check_dim("L", self.dim(), l.len())?;
        self.smoothness = l.to_vec();
        Ok(self)
    }

    pub fn with_start(mut self, x: &[f64]) -> Result<Self> {
        Error::check_dim("x_default", self.dim(), x.len())?;
        self.x_default = x.to_vec();
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.smoothness.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn smoothness(&self) -> &[f64] {
        &self.smoothness
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn f_sup(&self) -> Option<f64> {
        self.f_sup
    }

    pub fn x_default(&self) -> &[f64] {
        &self.x_default
    }

    /// `f(x₁) − f★` from the default start.
    pub fn initial_gap(&self) -> f64 {
        self.f(&self.x_default) - self.f_star
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        match &self.objective {
            Objective::Quadratic { curvature, x_opt } => {
                0.5 * x
                    .iter()
                    .zip(x_opt)
                    .zip(curvature)
                    .map(|((x, o), l)| l * (x - o) * (x - o))
                    .sum::<f64>()
            }
            Objective::BoundedCosine {
                amplitude,
                frequency,
            } => x
                .iter()
                .zip(amplitude)
                .zip(frequency)
                .map(|((x, a), w)| a * (1.0 - cos(w * x)))
                .sum(),
        }
    }

    pub fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.objective {
            Objective::Quadratic { curvature, x_opt } => {
                for i in 0..out.len() {
                    out[i] = curvature[i] * (x[i] - x_opt[i]);
                }
            }
            Objective::BoundedCosine {
                amplitude,
                frequency,
            } => {
                for i in 0..out.len() {
                    out[i] = amplitude[i] * frequency[i] * sin(frequency[i] * x[i]);
                }
            }
        }
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.grad_into(x, &mut g);
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub n_samples: usize,
    /// Largest `|f(x) − f(y) − ⟨∇f(y), x−y⟩| − ½‖x−y‖²_L` seen (0 if never positive).
    pub max_secant_violation: f64,
    /// Largest ratio of the secant remainder to `½‖x−y‖²_L`.
    pub max_secant_ratio: f64,
    /// Largest `|fd − ∇ᵢf| / max(1, |∇ᵢf|)`.
    pub max_fd_error: f64,
    /// Samples with `f < f_star` or `f > f_sup`.
    pub bound_violations: usize,
    pub pass: bool,
}

pub const SECANT_SLACK: f64 = 1e-9;
pub const FD_TOLERANCE: f64 = 1e-6;
/// Half-width of the sampling box around `x_default`.
pub const SAMPLE_RADIUS: f64 = 10.0;

/// Randomised test of the smoothness, gradient and boundedness declarations.
pub fn check_assumptions(p: &Problem, n_samples: usize, seed: u64) -> Result<AssumptionReport> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples", "must be at least 1"));
    }
    let d = p.dim();
    let key = StreamKey::new(seed, 0).with_domain(domain::SAMPLING);
    let l = p.smoothness();
    let mut x = vec![0.0; d];
    let mut y = vec![0.0; d];
    let mut gy = vec![0.0; d];
    let mut gx = vec![0.0; d];
    let mut probe = vec![0.0; d];
    let mut rep = AssumptionReport {
        n_samples,
        max_secant_violation: 0.0,
        max_secant_ratio: 0.0,
        max_fd_error: 0.0,
        bound_violations: 0,
        pass: true,
    };

    for k in 0..n_samples as u64 {
        let mut rng = key.at(k);
        for i in 0..d {
            x[i] = p.x_default[i] + SAMPLE_RADIUS * (2.0 * rng.uniform() - 1.0);
            y[i] = p.x_default[i] + SAMPLE_RADIUS * (2.0 * rng.uniform() - 1.0);
        }
        let (fx, fy) = (p.f(&x), p.f(&y));
        p.grad_into(&y, &mut gy);
        let mut lin = fy;
        let mut quad = 0.0;
        for i in 0..d {
            let dx = x[i] - y[i];
            lin += gy[i] * dx;
            quad += 0.5 * l[i] * dx * dx;
        }
        let rem = fabs(fx - lin);
        let excess = rem - quad;
        if excess > rep.max_secant_violation {
            rep.max_secant_violation = excess;
        }
        if quad > 0.0 && rem / quad > rep.max_secant_ratio {
            rep.max_secant_ratio = rem / quad;
        }

        for fv in [fx, fy] {
            if fv < p.f_star || p.f_sup.is_some_and(|s| fv > s) {
                rep.bound_violations += 1;
            }
        }

        p.grad_into(&x, &mut gx);
        probe.copy_from_slice(&x);
        for i in 0..d {
            let h = 1e-5 * (1.0 + fabs(x[i]));
            probe[i] = x[i] + h;
            let fp = p.f(&probe);
            probe[i] = x[i] - h;
            let fm = p.f(&probe);
            probe[i] = x[i];
            let fd = (fp - fm) / (2.0 * h);
            let err = fabs(fd - gx[i]) / fabs(gx[i]).max(1.0);
            if err > rep.max_fd_error {
                rep.max_fd_error = err;
            }
        }
    }
    rep.pass = rep.max_secant_violation <= SECANT_SLACK
        && rep.max_fd_error <= FD_TOLERANCE
        && rep.bound_violations == 0;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn quadratic_examples() {
        let p = Problem::quadratic(&[1.0], &[0.0]).unwrap();
        assert_eq!(p.f(&[2.0]), 2.0);
        assert_eq!(p.grad(&[2.0]), vec![2.0]);

        let p = Problem::quadratic(&[1.0, 4.0], &[0.0, 0.0]).unwrap();
        assert_eq!(p.f(&[1.0, 1.0]), 2.5);
        assert_eq!(p.grad(&[1.0, 1.0]), vec![1.0, 4.0]);

        let p = Problem::quadratic(&[3.0], &[1.0]).unwrap();
        assert_eq!(p.f(&[1.0]), 0.0);
        assert_eq!(p.grad(&[1.0]), vec![0.0]);
        assert_eq!(p.f_star(), 0.0);
        assert_eq!(p.f_sup(), None);
    }

    #[test]
    fn quadratic_rejects_non_positive_curvature() {
        assert!(matches!(
            Problem::quadratic(&[1.0, 0.0], &[0.0, 0.0]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(Problem::quadratic(&[-1.0], &[0.0]).is_err());
        assert!(Problem::quadratic(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn cosine_examples() {
        let p = Problem::bounded_cosine(&[1.0], &[1.0]).unwrap();
        assert_eq!(p.f(&[0.0]), 0.0);
        assert_eq!(p.grad(&[0.0]), vec![0.0]);
        assert_eq!(p.f(&[PI]), 2.0);
        assert!(p.grad(&[PI])[0].abs() < 1e-15);

        let p = Problem::bounded_cosine(&[2.0], &[3.0]).unwrap();
        assert_eq!(p.smoothness(), &[18.0]);
        assert_eq!(p.f_sup(), Some(4.0));
        assert!(Problem::bounded_cosine(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn quadratic_passes_with_unit_ratio() {
        let p = Problem::quadratic(&[0.5, 2.0, 7.0], &[1.0, -2.0, 0.3]).unwrap();
        let r = check_assumptions(&p, 100, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_secant_violation <= SECANT_SLACK);
        assert!((r.max_secant_ratio - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn cosine_passes() {
        let p = Problem::bounded_cosine(&[1.0, 0.5], &[1.0, 2.0]).unwrap();
        let r = check_assumptions(&p, 100, 2).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_secant_ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn halved_smoothness_is_detected() {
        let p = Problem::quadratic(&[1.0, 4.0], &[0.0, 0.0])
            .unwrap()
            .with_smoothness(&[0.5, 2.0])
            .unwrap();
        let r = check_assumptions(&p, 100, 3).unwrap();
        assert!(!r.pass);
        assert!(r.max_secant_violation > 0.0);

        let p = Problem::bounded_cosine(&[1.0], &[1.0])
            .unwrap()
            .with_smoothness(&[0.5])
            .unwrap();
        let r = check_assumptions(&p, 200, 3).unwrap();
        assert!(!r.pass, "{r:?}");
    }

    #[test]
    fn zero_samples_rejected() {
        let p = Problem::quadratic(&[1.0], &[0.0]).unwrap();
        assert!(check_assumptions(&p, 0, 0).is_err());
    }
}
