//! Log-log rate fits.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub used: usize,
    /// Points rejected for a non-positive (or non-finite) coordinate.
    pub dropped: usize,
}

/// Least squares of `ln metric` on `ln T`. Needs three usable points.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<Fit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, m)| *t > 0.0 && *m > 0.0 && t.is_finite() && m.is_finite())
        .map(|(t, m)| (t.ln(), m.ln()))
        .collect();
    let dropped = points.len() - usable.len();
    if dropped > 0 {
        eprintln!("warning: fit_rate dropped {dropped} non-positive point(s)");
    }
    if usable.len() < 3 {
        bail!(
            "fit_rate needs at least 3 positive points, got {}",
            usable.len()
        );
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &usable {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        bail!("fit_rate needs at least two distinct horizons");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = usable
        .iter()
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(Fit {
        slope,
        intercept,
        r_squared,
        used: usable.len(),
        dropped,
    })
}

/// Slope of the segment between two positive points in log-log space.
pub fn two_point_slope(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1.ln() - a.1.ln()) / (b.0.ln() - a.0.ln())
}
