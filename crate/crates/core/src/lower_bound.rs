//! The one-dimensional hard instance for AdaGrad.
//!
//! A piecewise-quadratic `f` has slope exactly `−ε` on a grid
//! `y₁ < y₂ < … < y_{T★}` whose spacings `δ_t = γ/(λq/ε + √t)` are the steps
//! AdaGrad takes after its t-th non-zero gradient. The oracle returns
//! `(r/q) f'(x)` on the grid with `r ~ Bernoulli(q)`, so AdaGrad advances one
//! grid point per success and stalls otherwise. Until it has seen `T★`
//! successes every iterate sits on the grid with `|f'| = ε`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{div_or_zero, fabs, ln, log_grid, powf, sqrt, KahanSum};
use crate::rng::{domain, StreamKey};
use crate::stats::{binomial_ci95, summarize};

/// Largest horizon examined when searching for `T★`.
pub const T_STAR_SCAN_CAP: u64 = 1_000_000_000;
/// Largest grid kept in memory.
pub const GRID_CAP: u64 = 1 << 24;

/// Bernoulli success probability `1 / [1 + (p−1)/4 (2σ/ε)^p]^{1/(p−1)}`.
pub fn q_of(p: f64, sigma: f64, eps: f64) -> f64 {
    let base = 1.0 + 0.25 * (p - 1.0) * powf(2.0 * sigma / eps, p);
    1.0 / powf(base, 1.0 / (p - 1.0))
}

/// `δ_t = γ / (λq/ε + √t)` for `t ≥ 1`.
#[inline]
pub fn delta_at(gamma: f64, lambda: f64, q: f64, eps: f64, t: u64) -> f64 {
    gamma / (lambda * q / eps + sqrt(t as f64))
}

/// `δ₁, …, δ_{t_cap}`.
pub fn delta_seq(gamma: f64, lambda: f64, q: f64, eps: f64, t_cap: usize) -> Vec<f64> {
    (1..=t_cap as u64)
        .map(|t| delta_at(gamma, lambda, q, eps, t))
        .collect()
}

fn t_star_scan(
    big_delta: f64,
    eps: f64,
    l: f64,
    cap: u64,
    mut delta: impl FnMut(u64) -> Option<f64>,
) -> Result<u64> {
    let target = eps * eps / (2.0 * l);
    let mut s1 = KahanSum::new();
    let mut s2 = KahanSum::new();
    for t in 1..=cap {
        let Some(d) = delta(t) else { break };
        s1.add(d);
        s2.add(d * d);
        if big_delta - eps * s1.value() + 0.25 * l * s2.value() < target {
            return Ok(t);
        }
    }
    Err(Error::InstanceTooLarge {
        what: "T_star scan",
        cap,
    })
}

/// Smallest `T` with `Δ − ε Σ_{t≤T} δ_t + (L/4) Σ_{t≤T} δ_t² < ε²/(2L)`, using the
/// given `δ` prefix. Errors if the prefix is too short.
pub fn t_star(big_delta: f64, eps: f64, l: f64, deltas: &[f64]) -> Result<u64> {
    t_star_scan(big_delta, eps, l, deltas.len() as u64, |t| {
        deltas.get(t as usize - 1).copied()
    })
}

/// Root of `2c = (1+c) ln(1+c)` on `[1, 10]`, by bisection.
pub fn c_root() -> f64 {
    let h = |c: f64| 2.0 * c - (1.0 + c) * ln(1.0 + c);
    let (mut lo, mut hi) = (1.0, 10.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardParams {
    pub delta: f64,
    pub l: f64,
    pub p: f64,
    pub sigma: f64,
    pub eps: f64,
    pub x1: f64,
    pub gamma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    pub params: HardParams,
    pub q: f64,
    pub t_star: u64,
    /// Realized spacings `y_{t+1} − y_t`, equal to `δ_t` up to rounding.
    pub delta_seq: Vec<f64>,
    /// `y₁, …, y_{T★}`, produced by the AdaGrad update with `g = −ε/q`.
    pub y_grid: Vec<f64>,
    /// `f(y_t)` from compensated prefix sums.
    pub f_grid: Vec<f64>,
}

fn finite_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, alloc::format!("{v} must be positive")))
    }
}

impl HardInstance {
    pub fn build(hp: HardParams) -> Result<Self> {
        finite_positive("Delta", hp.delta)?;
        finite_positive("L", hp.l)?;
        finite_positive("gamma", hp.gamma)?;
        finite_positive("eps", hp.eps)?;
        if !(hp.p > 1.0 && hp.p <= 2.0) {
            return Err(Error::invalid("p", "must lie in (1, 2]"));
        }
        if !(hp.sigma.is_finite() && hp.sigma >= 0.0) {
            return Err(Error::invalid("sigma", "must be finite and >= 0"));
        }
        if !(hp.lambda.is_finite() && hp.lambda >= 0.0) {
            return Err(Error::invalid("lambda", "must be finite and >= 0"));
        }
        if !hp.x1.is_finite() {
            return Err(Error::invalid("x1", "must be finite"));
        }
        if hp.eps > sqrt(2.0 * hp.delta * hp.l) {
            return Err(Error::invalid("eps", "must not exceed sqrt(2 Delta L)"));
        }
        if hp.sigma == 0.0 && hp.lambda != 0.0 {
            return Err(Error::invalid("lambda", "must be 0 when sigma = 0"));
        }
        let q = q_of(hp.p, hp.sigma, hp.eps);
        if !(q > 0.0) {
            return Err(Error::invalid(
                "sigma",
                "success probability underflows to 0",
            ));
        }
        let t_star = t_star_scan(hp.delta, hp.eps, hp.l, T_STAR_SCAN_CAP, |t| {
            Some(delta_at(hp.gamma, hp.lambda, q, hp.eps, t))
        })?;
        if t_star > GRID_CAP {
            return Err(Error::InstanceTooLarge {
                what: "y grid",
                cap: GRID_CAP,
            });
        }
        let n = t_star as usize;
        // Replay the AdaGrad recursion under a run of successful draws so a
        // float iterate lands on the stored grid bit for bit.
        let g = -hp.eps / q;
        let mut v = 0.0;
        let mut y = hp.x1;
        let mut delta_seq = Vec::with_capacity(n - 1);
        let mut y_grid = Vec::with_capacity(n);
        let mut f_grid = Vec::with_capacity(n);
        let (mut s1, mut s2) = (KahanSum::new(), KahanSum::new());
        y_grid.push(y);
        f_grid.push(hp.delta);
        for _ in 1..n {
            v += g * g;
            let next = y - div_or_zero(hp.gamma * g, hp.lambda + sqrt(v));
            let d = next - y;
            y = next;
            s1.add(d);
            s2.add(d * d);
            delta_seq.push(d);
            y_grid.push(y);
            f_grid.push(hp.delta - hp.eps * s1.value() + 0.25 * hp.l * s2.value());
        }
        Ok(HardInstance {
            params: hp,
            q,
            t_star,
            delta_seq,
            y_grid,
            f_grid,
        })
    }

    /// Index `k` (0-based) of the piece containing `x`, or `None` left of `y₁`.
    fn piece(&self, x: f64) -> Option<usize> {
        let k = self.y_grid.partition_point(|y| *y <= x);
        k.checked_sub(1)
    }

    /// 0-based index of a grid point bit-equal to `x`.
    pub fn grid_index(&self, x: f64) -> Option<usize> {
        let k = self.y_grid.partition_point(|y| *y < x);
        (k < self.y_grid.len() && self.y_grid[k].to_bits() == x.to_bits()).then_some(k)
    }

    pub fn f_prime(&self, x: f64) -> f64 {
        let HardParams { eps, l, .. } = self.params;
        match self.piece(x) {
            None => -eps,
            Some(k) if k + 1 == self.y_grid.len() => -eps + l * (x - self.y_grid[k]),
            Some(k) => {
                let s = x - self.y_grid[k];
                let d = self.delta_seq[k];
                if s <= 0.5 * d {
                    -eps + l * s
                } else {
                    -eps + l * d - l * s
                }
            }
        }
    }

    pub fn f_val(&self, x: f64) -> f64 {
        let HardParams { eps, l, delta, .. } = self.params;
        match self.piece(x) {
            None => delta + eps * (self.y_grid[0] - x),
            Some(k) if k + 1 == self.y_grid.len() => {
                let s = x - self.y_grid[k];
                self.f_grid[k] - eps * s + 0.5 * l * s * s
            }
            Some(k) => {
                let s = x - self.y_grid[k];
                let d = self.delta_seq[k];
                if s <= 0.5 * d {
                    self.f_grid[k] - eps * s + 0.5 * l * s * s
                } else {
                    self.f_grid[k] - eps * s + l * d * s - 0.5 * l * s * s - 0.25 * l * d * d
                }
            }
        }
    }

    /// Oracle at grid point `k` (0-based): `(r/q)·(−ε)`.
    #[inline]
    pub fn oracle_at_index(&self, r: bool) -> f64 {
        if r {
            -self.params.eps / self.q
        } else {
            0.0
        }
    }

    /// Oracle at an arbitrary point; grid membership is bit-exact.
    pub fn oracle(&self, x: f64, r: bool) -> f64 {
        match self.grid_index(x) {
            Some(_) => self.oracle_at_index(r),
            None => self.f_prime(x),
        }
    }

    /// `(E[g], E|g − f'|^p)` at a grid point, by enumerating `r ∈ {0, 1}`.
    pub fn oracle_moments(&self) -> (f64, f64) {
        let HardParams { eps, p, .. } = self.params;
        let q = self.q;
        let fp = -eps;
        let g1 = self.oracle_at_index(true);
        let g0 = self.oracle_at_index(false);
        let mean = q * g1 + (1.0 - q) * g0;
        let moment = q * powf(fabs(g1 - fp), p) + (1.0 - q) * powf(fabs(g0 - fp), p);
        (mean, moment)
    }

    /// Minimum of `f` on a grid of spacing `ε/(100L)` covering
    /// `[y₁ − 2ε/L, y_{T★} + 2ε/L]`.
    pub fn scanned_min(&self) -> Result<f64> {
        let HardParams { eps, l, .. } = self.params;
        let lo = self.y_grid[0] - 2.0 * eps / l;
        let hi = self.y_grid[self.y_grid.len() - 1] + 2.0 * eps / l;
        let h = eps / (100.0 * l);
        let n = ((hi - lo) / h) as u64 + 1;
        if n > 100_000_000 {
            return Err(Error::InstanceTooLarge {
                what: "inf f scan",
                cap: 100_000_000,
            });
        }
        let mut m = f64::INFINITY;
        for k in 0..=n {
            let v = self.f_val(lo + h * k as f64);
            if v < m {
                m = v;
            }
        }
        Ok(m)
    }

    /// `(T_operational, T_asymptotic)`; see [`lb_threshold`].
    pub fn threshold(&self) -> (f64, f64) {
        lb_threshold(self)
    }
}

/// `T_op = (T★−1)/(2q)` and the bracketed lower-bound expression without its
/// hidden constant.
pub fn lb_threshold(inst: &HardInstance) -> (f64, f64) {
    let HardParams {
        delta,
        l,
        p,
        sigma,
        eps,
        gamma,
        lambda,
        ..
    } = inst.params;
    let t_op = (inst.t_star - 1) as f64 / (2.0 * inst.q);
    let pb = p / (p - 1.0);
    let s = powf(sigma, pb) * powf(eps, -pb);
    let lg = ln(gamma * l * (1.0 + s) / (lambda + eps * (1.0 + s)));
    let core = delta * delta / (gamma * gamma) + gamma * gamma * l * l * lg * lg;
    let t_asym = (lambda * delta / gamma + core) / (eps * eps)
        + core * powf(sigma, pb) / powf(eps, (3.0 * p - 2.0) / (p - 1.0));
    (t_op, t_asym)
}

/// The three small-ε conditions under which the lower bound is proved.
pub fn eps_conditions(inst: &HardInstance) -> [bool; 3] {
    let HardParams {
        delta,
        l,
        eps,
        gamma,
        lambda,
        ..
    } = inst.params;
    let a = lambda * inst.q / eps;
    let r = 16.0 * eps / (gamma * l);
    let c = c_root();
    [
        eps <= sqrt(delta * l),
        ln(1.0 + 1.0 / (a * a + 1.0)) >= r,
        r * sqrt(a * a + 1.0) <= ln(c) / sqrt(2.0 * c),
    ]
}

pub fn eps_feasible(inst: &HardInstance) -> bool {
    eps_conditions(inst).iter().all(|c| *c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// Track the iterate as a grid index while it is on the grid.
    Lattice,
    /// Run the floating-point AdaGrad step and test membership bit-exactly.
    Float,
}

/// One simulated path of AdaGrad against the Bernoulli oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StallPath {
    /// `R_T`, the number of successful draws.
    pub r_total: u64,
    /// The event `R_T ≤ T★ − 1`.
    pub stalled: bool,
    /// `(1/T) Σ |f'(x_t)|`.
    pub metric: f64,
    pub on_grid_steps: u64,
    pub off_grid_steps: u64,
    /// Steps with `R_{t−1} < T★` at which `x_t ≠ y_{R_{t−1}+1}`.
    pub lattice_mismatches: u64,
    pub grid_violation: bool,
    pub final_x: f64,
}

/// Runs AdaGrad (γ, λ from the instance) for `horizon` steps. The draw `r_t`
/// comes from `key` in the Bernoulli domain at step `t`.
pub fn stall_path(inst: &HardInstance, horizon: u64, key: StreamKey, mode: GridMode) -> StallPath {
    let HardParams {
        eps, gamma, lambda, ..
    } = inst.params;
    let key = key.with_domain(domain::BERNOULLI);
    let n_grid = inst.y_grid.len() as u64;
    let mut r_total = 0u64;
    let mut v = 0.0;
    let mut on = 0u64;
    let mut off = 0u64;
    let mut off_sum = 0.0;
    let mut mismatches = 0u64;
    let mut lattice = mode == GridMode::Lattice;
    let mut k = 0usize;
    let mut x = inst.params.x1;

    for t in 1..=horizon {
        let r = key.at(t).bernoulli(inst.q);
        if lattice {
            on += 1;
            if r {
                r_total += 1;
                let g = inst.oracle_at_index(true);
                v += g * g;
                if k + 1 < inst.y_grid.len() {
                    k += 1;
                } else {
                    x = inst.y_grid[k] - div_or_zero(gamma * g, lambda + sqrt(v));
                    lattice = false;
                }
            }
            continue;
        }
        if r_total < n_grid && x.to_bits() != inst.y_grid[r_total as usize].to_bits() {
            mismatches += 1;
        }
        let g = match inst.grid_index(x) {
            Some(_) => {
                on += 1;
                inst.oracle_at_index(r)
            }
            None => {
                off += 1;
                let fp = inst.f_prime(x);
                off_sum += fabs(fp);
                fp
            }
        };
        if r {
            r_total += 1;
        }
        v += g * g;
        x -= div_or_zero(gamma * g, lambda + sqrt(v));
    }
    if mode == GridMode::Lattice && lattice {
        x = inst.y_grid[k];
    }
    let stalled = r_total < inst.t_star;
    StallPath {
        r_total,
        stalled,
        metric: (on as f64 * eps + off_sum) / horizon as f64,
        on_grid_steps: on,
        off_grid_steps: off,
        lattice_mismatches: mismatches,
        grid_violation: stalled && (off > 0 || mismatches > 0),
        final_x: x,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StallStats {
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

impl StallStats {
    pub fn aggregate(horizon: u64, paths: &[StallPath]) -> Self {
        let n = paths.len();
        let n_stalled = paths.iter().filter(|p| p.stalled).count();
        let m = summarize(paths.iter().map(|p| p.metric));
        let r = summarize(paths.iter().map(|p| p.r_total as f64));
        StallStats {
            horizon,
            n_seeds: n,
            n_stalled,
            frac_stalled: if n == 0 {
                0.0
            } else {
                n_stalled as f64 / n as f64
            },
            frac_ci95: binomial_ci95(n_stalled, n),
            mean_metric: m.mean,
            metric_ci95: m.ci95(),
            mean_r: r.mean,
            grid_violations: paths.iter().filter(|p| p.grid_violation).count(),
        }
    }
}

/// Runs `n_seeds` paths keyed `(base_seed, seed index)` and aggregates them.
/// Any stalled path that leaves the grid falsifies the construction.
pub fn stall_experiment(
    inst: &HardInstance,
    horizon: u64,
    n_seeds: usize,
    base_seed: u64,
    mode: GridMode,
) -> Result<(StallStats, Vec<StallPath>)> {
    if horizon == 0 || n_seeds == 0 {
        return Err(Error::invalid("T / n_seeds", "must be at least 1"));
    }
    let paths: Vec<StallPath> = (0..n_seeds as u64)
        .map(|s| stall_path(inst, horizon, StreamKey::new(base_seed, s), mode))
        .collect();
    let stats = StallStats::aggregate(horizon, &paths);
    if stats.grid_violations > 0 {
        return Err(Error::TheoryFalsified {
            check: "stall grid containment",
            step: horizon,
            lhs: stats.grid_violations as f64,
            rhs: 0.0,
        });
    }
    Ok((stats, paths))
}

/// Brute-force `inf{T : ln(1+T/B)/√T < A}` by scanning from `T = 1`.
pub fn first_crossing(a: f64, b: f64, cap: u64) -> Option<u64> {
    (1..=cap).find(|&t| ln(1.0 + t as f64 / b) / sqrt(t as f64) < a)
}

/// Log grid helper re-exported for lemma scans.
pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    log_grid(lo, hi, n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(sigma: f64, lambda: f64) -> HardParams {
        HardParams {
            delta: 5.0,
            l: 1.0,
            p: 2.0,
            sigma,
            eps: 1.0,
            x1: 0.0,
            gamma: 1.0,
            lambda,
        }
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_of(2.0, 1.0, 1.0), 0.5);
        assert_eq!(q_of(1.7, 0.0, 0.3), 1.0);
        assert!((q_of(1.5, 2.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn delta_examples() {
        let d = delta_seq(1.0, 0.0, 1.0, 1.0, 4);
        assert_eq!(d[0], 1.0);
        assert_eq!(d[3], 0.5);
        // λq/ε = 1
        assert!((delta_at(1.0, 2.0, 0.5, 1.0, 4) - 1.0 / 3.0).abs() < 1e-16);
        let d2 = delta_seq(2.0, 0.3, 0.7, 1.1, 10);
        let d1 = delta_seq(1.0, 0.3, 0.7, 1.1, 10);
        for (a, b) in d2.iter().zip(&d1) {
            assert_eq!(*a, 2.0 * b);
        }
        assert!(d1.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn t_star_examples() {
        let d = delta_seq(1.0, 0.0, 1.0, 1.0, 100);
        assert_eq!(t_star(5.0, 1.0, 1.0, &d).unwrap(), 11);
        assert_eq!(t_star(1.0, 1.0, 1.0, &d).unwrap(), 1);
        let mut prev = 0;
        for big in [1.0, 2.0, 3.5, 5.0, 8.0, 13.0] {
            let ts = t_star(big, 1.0, 1.0, &d).unwrap();
            assert!(ts >= prev);
            prev = ts;
        }
        assert!(matches!(
            t_star(5.0, 1.0, 1.0, &d[..5]),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn build_deterministic_instance() {
        let inst = HardInstance::build(base(0.0, 0.0)).unwrap();
        assert_eq!(inst.q, 1.0);
        assert_eq!(inst.t_star, 11);
        assert_eq!(inst.delta_seq.len(), 10);
        assert_eq!(inst.y_grid.len(), 11);
        assert_eq!(inst.y_grid[0], 0.0);
        let mut y = 0.0;
        for t in 1..=10u64 {
            y += 1.0 / (t as f64).sqrt();
            assert_eq!(inst.y_grid[t as usize], y);
        }
        assert!(inst.y_grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn build_hypotheses() {
        let mut hp = base(0.0, 0.0);
        hp.eps = (2.0 * hp.delta * hp.l).sqrt();
        assert!(HardInstance::build(hp).is_ok());
        hp.eps *= 1.0 + 1e-12;
        assert!(HardInstance::build(hp).is_err());
        assert!(HardInstance::build(base(0.0, 0.5)).is_err());
        assert!(HardInstance::build(base(1.0, 0.5)).is_ok());
    }

    #[test]
    fn slope_is_minus_eps_on_grid() {
        for hp in [base(0.0, 0.0), base(1.0, 0.3), base(2.5, 0.0)] {
            let inst = HardInstance::build(hp).unwrap();
            for &y in &inst.y_grid {
                assert_eq!(inst.f_prime(y), -hp.eps);
            }
        }
    }

    #[test]
    fn f_prime_examples() {
        let inst = HardInstance::build(base(0.0, 0.0)).unwrap();
        for t in 0..10 {
            let d = inst.delta_seq[t];
            let x = inst.y_grid[t] + 0.5 * d;
            assert!((inst.f_prime(x) - (-1.0 + 0.5 * d)).abs() < 1e-15);
        }
        let last = *inst.y_grid.last().unwrap();
        assert_eq!(inst.f_prime(last + 1.0), 0.0);
        assert_eq!(inst.f_prime(-3.0), -1.0);
    }

    #[test]
    fn f_val_examples() {
        let inst = HardInstance::build(base(0.0, 0.0)).unwrap();
        assert_eq!(inst.f_val(inst.y_grid[0]), 5.0);
        let d1 = inst.delta_seq[0];
        assert!((inst.f_val(inst.y_grid[1]) - (5.0 - d1 + 0.25 * d1 * d1)).abs() < 1e-14);
        for k in 0..inst.y_grid.len() {
            assert!((inst.f_val(inst.y_grid[k]) - inst.f_grid[k]).abs() < 1e-13);
        }
        let m = inst.scanned_min().unwrap();
        assert!(m >= 0.0);
        assert!(inst.f_val(inst.y_grid[0]) - m <= 5.0);
    }

    #[test]
    fn oracle_examples() {
        let inst = HardInstance::build(base(1.0, 0.0)).unwrap();
        assert_eq!(inst.q, 0.5);
        let y = inst.y_grid[3];
        assert_eq!(inst.oracle(y, false), 0.0);
        assert_eq!(inst.oracle(y, true), -2.0);
        let x = y + 0.1;
        assert_eq!(inst.oracle(x, true), inst.f_prime(x));
        assert_eq!(inst.oracle(x, false), inst.f_prime(x));
        let (mean, mom) = inst.oracle_moments();
        assert_eq!(mean, -1.0);
        assert!((mom - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn c_root_in_stated_interval() {
        let c = c_root();
        assert!((3.92..=3.93).contains(&c), "{c}");
        assert!((2.0 * c - (1.0 + c) * (1.0 + c).ln()).abs() < 1e-10);
    }

    #[test]
    fn eps_feasibility_examples() {
        // λ = 0 reduces to ε ≤ √(ΔL), r ≤ ln 2 and r ≤ ln c/√(2c)
        let mut hp = base(0.0, 0.0);
        hp.eps = 0.01;
        hp.gamma = 2.0;
        let inst = HardInstance::build(hp).unwrap();
        let r = 16.0 * hp.eps / (hp.gamma * hp.l);
        let c = c_root();
        let expect = [
            hp.eps <= (hp.delta * hp.l).sqrt(),
            r <= 2f64.ln(),
            r <= c.ln() / (2.0 * c).sqrt(),
        ];
        assert_eq!(eps_conditions(&inst), expect);
        assert!(eps_feasible(&inst));

        let mut hp = base(0.0, 0.0);
        hp.gamma = 1.0 / hp.l * hp.eps;
        let inst = HardInstance::build(hp).unwrap();
        assert!(!eps_conditions(&inst)[2]);
        assert!(!eps_feasible(&inst));
    }

    #[test]
    fn threshold_examples() {
        let inst = HardInstance::build(base(0.0, 0.0)).unwrap();
        let (t_op, _) = lb_threshold(&inst);
        assert_eq!(t_op, 5.0);
        let a = HardInstance::build(base(1.0, 0.0)).unwrap();
        let b = HardInstance::build(base(2.0, 0.0)).unwrap();
        // 1/q = 1 + σ² at p = 2
        assert!((1.0 / b.q) / (1.0 / a.q) - 2.5 < 1e-12);
        assert!(lb_threshold(&b).1 > lb_threshold(&a).1);
    }

    #[test]
    fn deterministic_stall_is_exact_in_both_modes() {
        let inst = HardInstance::build(base(0.0, 0.0)).unwrap();
        for mode in [GridMode::Lattice, GridMode::Float] {
            let p = stall_path(&inst, 10, StreamKey::new(0, 0), mode);
            assert_eq!(p.r_total, 10);
            assert!(p.stalled);
            assert_eq!(p.metric, 1.0);
            assert_eq!(p.on_grid_steps, 10);
            assert!(!p.grid_violation);
            assert_eq!(p.final_x, inst.y_grid[10]);
        }
        let p = stall_path(&inst, 11, StreamKey::new(0, 0), GridMode::Float);
        assert!(!p.stalled);
    }

    #[test]
    fn lattice_and_float_agree_at_half_q() {
        let inst = HardInstance::build(base(1.0, 0.0)).unwrap();
        for s in 0..50 {
            let a = stall_path(&inst, 30, StreamKey::new(9, s), GridMode::Lattice);
            let b = stall_path(&inst, 30, StreamKey::new(9, s), GridMode::Float);
            assert_eq!(a.r_total, b.r_total);
            if a.stalled {
                assert_eq!(a.metric, b.metric);
                assert_eq!(a.final_x, b.final_x);
                assert!(!b.grid_violation, "{b:?}");
            }
        }
    }

    #[test]
    fn stall_path_is_reproducible() {
        let inst = HardInstance::build(base(1.0, 0.2)).unwrap();
        let a = stall_path(&inst, 40, StreamKey::new(3, 1), GridMode::Lattice);
        let b = stall_path(&inst, 40, StreamKey::new(3, 1), GridMode::Lattice);
        assert_eq!(a, b);
    }

    #[test]
    fn lemma_b2_crossing_small_case() {
        assert_eq!(first_crossing(10.0, 1.0, 10), Some(1));
        assert!(first_crossing(0.1, 1.0, 10).is_none());
    }
}
