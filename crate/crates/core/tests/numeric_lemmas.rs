use htopt_core::theory::lemmas::{b2_admissible, b2_bound, b2_margin, b3_scan_min};
use htopt_core::theory::numeric_lemma_checks;

#[test]
fn full_grids_have_no_counterexample() {
    let r = numeric_lemma_checks().unwrap();
    assert!(r.b2_points >= 200, "{r:?}");
    assert!(r.b3_points >= 200, "{r:?}");
    assert!(r.b2_min_margin >= 0);
    assert!(r.b3_min_margin >= 0.0);
}

#[test]
fn crossing_matches_direct_search_on_small_cases() {
    // independent scan written with std floats
    for (a, b) in [(0.3, 1.0), (0.2, 2.0), (0.1, 5.0), (0.04, 20.0)] {
        assert!(b2_admissible(a, b));
        let direct = (1u64..)
            .find(|&t| (1.0 + t as f64 / b).ln() / (t as f64).sqrt() < a)
            .unwrap();
        let bound = b2_bound(a, b);
        // the margin scan stops at 2·bound + 10
        let seen = direct.min(2 * bound + 11);
        assert_eq!(b2_margin(a, b), seen as i64 - bound as i64);
        assert!(direct >= bound);
    }
}

#[test]
fn log_infimum_trivial_for_small_a() {
    for a in [1e-3, 0.1, 1.0] {
        assert!(b3_scan_min(a, 1001) >= 0.0);
    }
}
