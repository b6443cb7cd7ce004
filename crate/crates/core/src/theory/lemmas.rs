//! Brute-force checks of the two scalar lemmas used by the lower bound:
//!
//! - `inf{T ∈ ℕ : ln(1+T/B)/√T < A} ≥ ⌈(4/A²) ln²(2/(A√B))⌉` whenever
//!   `B ≥ 1`, `ln(1+1/B) ≥ A` and `A√B ≤ ln c/√(2c)`;
//! - `inf_{η>0} 1/η + η ln²(Aη) ≥ ln A`.

use crate::error::{Error, Result};
use crate::lower_bound::{c_root, first_crossing};
use crate::math::{ln, log_grid, sqrt};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaReport {
    pub b2_points: usize,
    /// Smallest `T_crossing − bound` over the grid.
    pub b2_min_margin: i64,
    pub b3_points: usize,
    /// Smallest `min_η(1/η + η ln²(Aη)) − ln A` over the grid.
    pub b3_min_margin: f64,
}

/// Hypotheses of the crossing lemma.
pub fn b2_admissible(a: f64, b: f64) -> bool {
    let c = c_root();
    b >= 1.0 && ln(1.0 + 1.0 / b) >= a && a * sqrt(b) <= ln(c) / sqrt(2.0 * c)
}

/// `⌈(4/A²) ln²(2/(A√B))⌉`.
pub fn b2_bound(a: f64, b: f64) -> u64 {
    let l = ln(2.0 / (a * sqrt(b)));
    libm::ceil(4.0 / (a * a) * l * l) as u64
}

/// Returns `T_crossing − bound`, scanning up to `2·bound + 10` (a crossing
/// beyond the cap counts as `cap + 1`).
pub fn b2_margin(a: f64, b: f64) -> i64 {
    let bound = b2_bound(a, b);
    let cap = 2 * bound + 10;
    let t = first_crossing(a, b, cap).unwrap_or(cap + 1);
    t as i64 - bound as i64
}

pub fn b3_objective(a: f64, eta: f64) -> f64 {
    let l = ln(a * eta);
    1.0 / eta + eta * l * l
}

/// Scanned `min_η` over a log grid of `n` points in `[1e-6, 1e6]`.
pub fn b3_scan_min(a: f64, n: usize) -> f64 {
    log_grid(1e-6, 1e6, n)
        .map(|eta| b3_objective(a, eta))
        .fold(f64::INFINITY, f64::min)
}

/// Default grids: `A ∈ [0.01, 0.48]` × `B ∈ [1, 50]` (30 × 30 log points,
/// inadmissible ones skipped) and 201 values of `A` in `[1e-3, 1e3]` with
/// 12001 values of `η`.
pub fn numeric_lemma_checks() -> Result<LemmaReport> {
    let mut b2_points = 0;
    let mut b2_min = i64::MAX;
    for a in log_grid(0.01, 0.48, 30) {
        for b in log_grid(1.0, 50.0, 30) {
            if !b2_admissible(a, b) {
                continue;
            }
            b2_points += 1;
            let m = b2_margin(a, b);
            if m < 0 {
                return Err(Error::TheoryFalsified {
                    check: "crossing lemma",
                    step: (m + b2_bound(a, b) as i64) as u64,
                    lhs: a,
                    rhs: b,
                });
            }
            b2_min = b2_min.min(m);
        }
    }
    let mut b3_points = 0;
    let mut b3_min = f64::INFINITY;
    for a in log_grid(1e-3, 1e3, 201) {
        b3_points += 1;
        let m = b3_scan_min(a, 12_001);
        let gap = m - ln(a);
        if gap < 0.0 {
            return Err(Error::TheoryFalsified {
                check: "log infimum lemma",
                step: b3_points as u64,
                lhs: m,
                rhs: ln(a),
            });
        }
        b3_min = b3_min.min(gap);
    }
    Ok(LemmaReport {
        b2_points,
        b2_min_margin: b2_min,
        b3_points,
        b3_min_margin: b3_min,
    })
}
