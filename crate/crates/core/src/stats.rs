//! Monte Carlo summaries.

use crate::math::sqrt;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation / sqrt(n)).
    pub se: f64,
}

impl Summary {
    pub fn ci95(&self) -> f64 {
        Z95 * self.se
    }
}

/// Mean and standard error; `se` is 0 for fewer than two samples.
pub fn summarize(xs: impl IntoIterator<Item = f64>) -> Summary {
    // Welford
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for x in xs {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    if n == 0 {
        return Summary::default();
    }
    let se = if n > 1 {
        sqrt(m2 / (n - 1) as f64 / n as f64)
    } else {
        0.0
    };
    Summary { n, mean, se }
}

/// Normal-approximation 95% half-width for a binomial proportion.
pub fn binomial_ci95(successes: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = successes as f64 / n as f64;
    Z95 * sqrt(p * (1.0 - p) / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_constant_has_zero_se() {
        let s = summarize([2.0; 5]);
        assert_eq!(s.n, 5);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.se, 0.0);
    }

    #[test]
    fn summary_matches_two_pass() {
        let xs = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0];
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let s = summarize(xs);
        assert!((s.mean - mean).abs() < 1e-14);
        assert!((s.se - (var / n).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn binomial_extremes() {
        assert_eq!(binomial_ci95(10, 10), 0.0);
        assert_eq!(binomial_ci95(0, 0), 0.0);
        let h = binomial_ci95(50, 100);
        assert!((h - Z95 * 0.05).abs() < 1e-15);
    }
}
