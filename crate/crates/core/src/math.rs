//! Float helpers shared by the whole crate.
//!
//! All transcendental functions go through `libm` so results are identical with
//! or without `std`.

pub use libm::{cos, exp, fabs, floor, log, log1p, pow, sin, sqrt};

#[inline]
pub fn ln(x: f64) -> f64 {
    log(x)
}

#[inline]
pub fn powf(x: f64, e: f64) -> f64 {
    pow(x, e)
}

pub fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| fabs(*v)).sum()
}

pub fn norm2_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    sqrt(norm2_sq(x))
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter()
        .fold(0.0, |m, v| if fabs(*v) > m { fabs(*v) } else { m })
}

/// `(Σ |x_i|^p)^{1/p}`.
pub fn norm_p(x: &[f64], p: f64) -> f64 {
    powf(x.iter().map(|v| powf(fabs(*v), p)).sum::<f64>(), 1.0 / p)
}

/// `Σ_i w_i x_i²`, the squared norm induced by a positive weight vector.
pub fn weighted_norm_sq(x: &[f64], w: &[f64]) -> f64 {
    x.iter().zip(w).map(|(a, b)| b * a * a).sum()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `a / b` with the `0/0 := 0` convention used by the zero-gradient steps.
#[inline]
pub fn div_or_zero(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Log-spaced grid of `n >= 2` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (ln(lo), ln(hi));
    let last = (n.max(2) - 1) as f64;
    (0..n).map(move |k| exp(a + (b - a) * k as f64 / last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn kahan_beats_naive_on_tiny_increments() {
        let mut k = KahanSum::new();
        let mut naive = 0.0;
        k.add(1.0);
        naive += 1.0;
        for _ in 0..10_000 {
            k.add(1e-16);
            naive += 1e-16;
        }
        assert_eq!(naive, 1.0);
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-18);
    }

    #[test]
    fn div_or_zero_convention() {
        assert_eq!(div_or_zero(0.0, 0.0), 0.0);
        assert_eq!(div_or_zero(3.0, 2.0), 1.5);
        assert!(div_or_zero(1.0, 0.0).is_infinite());
    }

    proptest! {
        #[test]
        fn norms_match_coordinate_sums(x in proptest::collection::vec(-1e3f64..1e3, 1..12)) {
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            let l2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let linf = x.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!((norm1(&x) - l1).abs() <= 1e-12 * (1.0 + l1));
            prop_assert!((norm2(&x) - l2).abs() <= 1e-12 * (1.0 + l2));
            prop_assert_eq!(norm_inf(&x), linf);
            prop_assert!((norm_p(&x, 2.0) - l2).abs() <= 1e-9 * (1.0 + l2));
            // ||x||_2 <= ||x||_p for p <= 2
            prop_assert!(norm2(&x) <= norm_p(&x, 1.5) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g: Vec<f64> = log_grid(1e-3, 1e3, 7).collect();
        assert_eq!(g.len(), 7);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!((g[3] - 1.0).abs() < 1e-12);
        assert!((g[6] - 1e3).abs() < 1e-9);
    }
}
