use htopt::config::{Algo, MetricName, NoiseSpec, OptimizerCfg, ProblemSpec, RunConfig, TheoremId};
use htopt::emit::{emit_sweep, read_sweep_points, write_sweep_csv};
use htopt::lbdemo::{lb_demo, LbDemoConfig};
use htopt::monte_carlo::{cell_key, monte_carlo, SweepResult};
use htopt::verify::verify_bounds;
use htopt_core::optimizers::run_keyed;

fn cosine_cfg(noise: NoiseSpec) -> RunConfig {
    RunConfig {
        problem: ProblemSpec::BoundedCosine {
            amplitude: vec![1.0, 0.5],
            frequency: vec![1.0, 2.0],
            x0: None,
        },
        noise,
        optimizer: OptimizerCfg::adaptive(Algo::Adagradnorm, 0.5, 1.0),
        horizons: vec![50, 200, 800],
        n_seeds: 16,
        base_seed: 11,
        out_dir: None,
        checks: vec![],
        metric: MetricName::GradL2Avg,
        theorem: Some(TheoremId::T51),
        certificate_scale: 1.0,
    }
}

fn pareto() -> NoiseSpec {
    NoiseSpec::ParetoSym {
        p: 1.5,
        sigma: vec![1.0, 1.0],
        alpha: 3.0,
    }
}

#[test]
fn theorem_pins_metric_and_algorithm() {
    let mut c = cosine_cfg(pareto());
    assert!(c.validate().is_ok());
    c.metric = MetricName::GradL1Avg;
    assert!(c.validate().is_err());
    let mut c = cosine_cfg(pareto());
    c.optimizer = OptimizerCfg::adaptive(Algo::Adagrad, 0.5, 1.0);
    assert!(c.validate().is_err());
}

#[test]
fn horizons_must_increase() {
    let mut c = cosine_cfg(pareto());
    c.horizons = vec![100, 100];
    assert!(c.validate().is_err());
    c.horizons = vec![];
    assert!(c.validate().is_err());
}

#[test]
fn bounded_theorem_rejects_unbounded_objective() {
    let mut c = cosine_cfg(pareto());
    c.problem = ProblemSpec::Quadratic {
        l: vec![1.0, 4.0],
        x_opt: vec![0.0, 0.0],
        x0: None,
    };
    assert!(verify_bounds(&c).is_err());
}

#[test]
fn config_json_round_trip() {
    let c = cosine_cfg(pareto());
    let s = serde_json::to_string(&c).unwrap();
    let back: RunConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(&p, &s).unwrap();
    assert_eq!(RunConfig::load(&p).unwrap(), c);
}

#[test]
fn zero_noise_seeds_are_identical() {
    let sw = monte_carlo(&cosine_cfg(NoiseSpec::Zero { p: 1.5, dim: 2 })).unwrap();
    for a in &sw.aggregates {
        assert_eq!(a.metric_se, 0.0);
        assert_eq!(a.metric_ci95, 0.0);
    }
}

#[test]
fn metric_matches_recorded_trajectory() {
    let cfg = cosine_cfg(pareto());
    let sw = monte_carlo(&cfg).unwrap();
    let prob = cfg.problem.build().unwrap();
    let nm = cfg.noise.build().unwrap();
    let spec = cfg.optimizer.build().unwrap();
    for cell in sw.cells.iter().filter(|c| c.seed < 3) {
        let ti = cfg.horizons.iter().position(|&t| t == cell.t).unwrap();
        let tr = run_keyed(
            &prob,
            &nm,
            &spec,
            cell.t,
            cell_key(cfg.base_seed, ti, cell.seed as usize),
        )
        .unwrap();
        let mean = (1..=tr.len())
            .map(|t| tr.grad_at(t).iter().map(|g| g * g).sum::<f64>().sqrt())
            .sum::<f64>()
            / cell.t as f64;
        let m = cell.metric.unwrap();
        assert!((m - mean).abs() <= 1e-12 * m.max(1.0), "{m} vs {mean}");
        let u0: f64 = (1..=tr.len()).map(|t| tr.grad_at(t)[0].powi(2)).sum();
        assert!((cell.u[0] - u0).abs() <= 1e-12 * u0.max(1.0));
    }
}

#[test]
fn ci_shrinks_with_more_seeds() {
    let mut c = cosine_cfg(pareto());
    c.horizons = vec![200];
    c.n_seeds = 100;
    let small = monte_carlo(&c).unwrap().aggregates[0].metric_ci95;
    c.n_seeds = 400;
    let big = monte_carlo(&c).unwrap().aggregates[0].metric_ci95;
    let r = small / big;
    assert!((r - 2.0).abs() <= 0.4, "ratio {r}");
}

#[test]
fn sweep_is_deterministic() {
    let c = cosine_cfg(pareto());
    let a = monte_carlo(&c).unwrap();
    let b = monte_carlo(&c).unwrap();
    assert_eq!(a.aggregates, b.aggregates);
}

#[test]
fn empty_sweep_csv_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    write_sweep_csv(&p, &[], None).unwrap();
    let s = std::fs::read_to_string(&p).unwrap();
    assert_eq!(s.lines().count(), 1);
    assert!(s.starts_with("T,n_seeds"));
    assert!(read_sweep_points(&p).unwrap().is_empty());
}

#[test]
fn emitted_json_reproduces_aggregates() {
    let cfg = cosine_cfg(pareto());
    let (sweep, reports) = verify_bounds(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_sweep(dir.path(), "r", &sweep, Some(&reports)).unwrap();
    let json = std::fs::read_to_string(dir.path().join("sweep.json")).unwrap();
    let back: SweepResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back.aggregates, sweep.aggregates);
    let cells = std::fs::read_to_string(dir.path().join("cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 1 + cfg.horizons.len() * cfg.n_seeds);
    let pts = read_sweep_points(&dir.path().join("sweep.csv")).unwrap();
    assert_eq!(pts.len(), cfg.horizons.len());
    for (p, a) in pts.iter().zip(&sweep.aggregates) {
        assert_eq!(p.1.to_bits(), a.metric_mean.to_bits());
    }
}

#[test]
fn certificates_hold_and_shrunk_certificate_fails() {
    let mut c = cosine_cfg(pareto());
    c.n_seeds = 32;
    let (_, ok) = verify_bounds(&c).unwrap();
    assert!(ok.iter().all(|r| r.pass));
    c.certificate_scale = 0.05;
    let (_, bad) = verify_bounds(&c).unwrap();
    assert!(bad.iter().any(|r| !r.pass));
}

fn lb_cfg() -> LbDemoConfig {
    LbDemoConfig {
        delta: 20.0,
        smoothness: 1.0,
        p: 2.0,
        sigma: 3.0,
        eps: 1.0,
        gamma: 1.0,
        lambda: 0.0,
        x1: 0.0,
        horizon: None,
        seeds: 64,
        base_seed: 1,
        float_mode: false,
    }
}

#[test]
fn lb_demo_stalls_at_default_horizon() {
    let r = lb_demo(&lb_cfg()).unwrap();
    let s = &r.summary;
    assert_eq!(
        s.horizon,
        ((s.t_star - 1) as f64 / (2.0 * s.q)).floor() as u64
    );
    assert!(s.frac_stalled >= 0.5);
    assert!(s.mean_metric >= 0.5);
    assert_eq!(s.grid_violations, 0);
    assert_eq!(r.seeds.len(), 64);
    let mut f = lb_cfg();
    f.float_mode = true;
    let rf = lb_demo(&f).unwrap();
    assert_eq!(rf.seeds, r.seeds);
}

#[test]
fn lb_demo_rejects_large_eps() {
    let mut c = lb_cfg();
    c.eps = 10.0;
    assert!(lb_demo(&c).is_err());
}
