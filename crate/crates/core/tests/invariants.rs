use htopt_core::math::{norm1, norm2, norm_inf};
use htopt_core::optimizers::run_keyed;
use htopt_core::theory::descent::uniform_c;
use htopt_core::theory::{
    check_core_descent, check_path_adagrad, check_path_adagradnorm, proxy_c, Variant,
};
use htopt_core::{NoiseModel, OptimizerSpec, Problem, StreamKey};
use proptest::prelude::*;

fn problem(kind: u8, d: usize, s: f64) -> Problem {
    let l: Vec<f64> = (0..d).map(|i| s * (1.0 + i as f64)).collect();
    match kind {
        0 => Problem::quadratic(&l, &vec![0.3; d]).unwrap(),
        _ => Problem::bounded_cosine(&l, &vec![1.5; d]).unwrap(),
    }
}

fn noise(kind: u8, p: f64, d: usize, sigma: f64) -> NoiseModel {
    let s = vec![sigma; d];
    match kind {
        0 => NoiseModel::zero(p, d).unwrap(),
        1 => NoiseModel::discrete3(p, &s, 1.7).unwrap(),
        _ => NoiseModel::pareto_sym(p, &s, 1.1 * p + 0.1).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn per_path_inequalities_hold(
        pk in 0u8..2, nk in 0u8..3, d in 1usize..4,
        p in 1.2f64..2.0, sigma in 0.0f64..3.0, scale in 0.2f64..3.0,
        gamma in 0.01f64..3.0, lambda in 0.0f64..2.0, seed in any::<u64>(),
    ) {
        let prob = problem(pk, d, scale);
        let nm = noise(nk, p, d, sigma);
        let key = StreamKey::new(seed, 0);
        let tr = run_keyed(&prob, &nm, &OptimizerSpec::AdaGrad { gamma, lambda }, 300, key).unwrap();
        let r = check_path_adagrad(&tr, &prob);
        prop_assert!(r.is_ok(), "{r:?}");
        let tr = run_keyed(&prob, &nm, &OptimizerSpec::AdaGradNorm { gamma, lambda }, 300, key).unwrap();
        let r = check_path_adagradnorm(&tr, &prob);
        prop_assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn descent_lemmas_hold_for_all_c(
        pk in 0u8..2, d in 1usize..4, p in 1.2f64..2.0, sigma in 0.0f64..3.0,
        scale_a in 1.0f64..4.0, seed in any::<u64>(), c in 0.0f64..20.0,
        gamma in 0.01f64..3.0, lambda in 0.0f64..2.0,
    ) {
        let prob = problem(pk, d, 1.0);
        let nm = NoiseModel::discrete3(p, &vec![sigma; d], scale_a).unwrap();
        let mut r = StreamKey::new(seed, 0).at(0);
        let x: Vec<f64> = (0..d).map(|_| 8.0 * (r.uniform() - 0.5)).collect();
        for variant in [Variant::AdaGrad, Variant::Norm] {
            let v = uniform_c(variant, d, 4.0 * r.uniform());
            let cs = uniform_c(variant, d, c);
            let e = check_core_descent(variant, &prob, &nm, &x, &v, gamma, lambda, &cs).unwrap();
            prop_assert!(e.pass, "{variant:?} {e:?}");
        }
    }

    #[test]
    fn accumulator_is_the_sum_of_squares(seed in any::<u64>(), p in 1.2f64..2.0) {
        let prob = problem(0, 2, 1.0);
        let nm = noise(2, p, 2, 1.0);
        let tr = run_keyed(&prob, &nm, &OptimizerSpec::AdaGrad { gamma: 0.5, lambda: 0.1 }, 200, StreamKey::new(seed, 3)).unwrap();
        let mut v = [0.0; 2];
        for t in 1..=tr.len() {
            for (i, vi) in v.iter_mut().enumerate() {
                let g = tr.g_at(t)[i];
                prop_assert_eq!(g, tr.grad_at(t)[i] + tr.xi_at(t)[i]);
                *vi += g * g;
            }
            prop_assert_eq!(tr.v_at(t), &v[..]);
            if t > 1 {
                for i in 0..2 {
                    prop_assert!(tr.step_at(t)[i] <= tr.step_at(t - 1)[i]);
                }
            }
        }
    }

    #[test]
    fn proxy_c_tends_to_sigma(sigma in 0.0f64..5.0, dd in 0.01f64..50.0, t in 1u64..100_000) {
        let at2 = proxy_c(&[sigma], 2.0, t, &[dd]).unwrap()[0];
        prop_assert_eq!(at2, sigma);
        let near = proxy_c(&[sigma], 2.0 - 1e-9, t, &[dd]).unwrap()[0];
        prop_assert!((near - sigma).abs() <= 1e-6 * (1.0 + sigma));
    }

    #[test]
    fn norms_match_brute_force(xs in prop::collection::vec(-1e3f64..1e3, 1..8)) {
        let l1: f64 = xs.iter().map(|x| x.abs()).sum();
        let l2 = xs.iter().map(|x| x * x).sum::<f64>().sqrt();
        let li = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!((norm1(&xs) - l1).abs() <= 1e-12 * (1.0 + l1));
        prop_assert!((norm2(&xs) - l2).abs() <= 1e-12 * (1.0 + l2));
        prop_assert_eq!(norm_inf(&xs), li);
    }

    #[test]
    fn support_is_a_distribution(d in 1usize..5, p in 1.1f64..2.0, s in 0.0f64..3.0, a in 1.0f64..5.0) {
        let nm = NoiseModel::discrete3(p, &vec![s; d], a).unwrap();
        let sup = nm.enumerate_support().unwrap();
        let total: f64 = sup.iter().map(|o| o.prob).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for i in 0..d {
            let mean: f64 = sup.iter().map(|o| o.prob * o.xi[i]).sum();
            let mom: f64 = sup.iter().map(|o| o.prob * o.xi[i].abs().powf(p)).sum();
            prop_assert!(mean.abs() < 1e-12 * (1.0 + s));
            prop_assert!(mom <= s.powf(p) * (1.0 + 1e-12));
        }
    }
}
