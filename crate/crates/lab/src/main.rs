use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use htopt::config::{output_root, RunConfig, TheoremId};
use htopt::emit::{emit_sweep, read_sweep_points, write_json, write_trajectory_csv};
use htopt::fit::fit_rate;
use htopt::lbdemo::{emit_lb, lb_demo, LbDemoConfig};
use htopt::monte_carlo::monte_carlo;
use htopt::verify::{default_matrix, run_matrix, verify_bounds};
use htopt_core::optimizers::run;

#[derive(Parser)]
#[command(
    name = "htopt",
    version,
    about = "AdaGrad under heavy-tailed noise: sweeps, checks and stall demos"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Comma-separated horizons.
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<u64>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    certificate_scale: Option<f64>,
    /// Output directory (default: `$HTOPT_OUT`, else `./out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Identifier written into CSV rows.
    #[arg(long, default_value = "run")]
    run_id: String,
}

impl Overrides {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(n) = self.seeds {
            cfg.n_seeds = n;
        }
        if let Some(s) = self.base_seed {
            cfg.base_seed = s;
        }
        if let Some(h) = &self.horizons {
            cfg.horizons = h.clone();
        }
        if let Some(g) = self.gamma {
            cfg.optimizer.gamma = Some(g);
        }
        if let Some(l) = self.lambda {
            cfg.optimizer.lambda = Some(l);
        }
        if let Some(c) = self.certificate_scale {
            cfg.certificate_scale = c;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump a single trajectory (first horizon of the config).
    Run {
        #[command(flatten)]
        o: Overrides,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo over horizons × seeds.
    Sweep {
        #[command(flatten)]
        o: Overrides,
    },
    /// Bound certificates for the config's theorem, or the per-path checker matrix.
    Verify {
        #[arg(long, conflicts_with = "matrix")]
        config: Option<PathBuf>,
        /// Run the default checker matrix instead of a config.
        #[arg(long)]
        matrix: bool,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 3)]
        matrix_seeds: u64,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        horizons: Option<Vec<u64>>,
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long)]
        certificate_scale: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "verify")]
        run_id: String,
    },
    /// Stall experiment on the hard instance.
    LbDemo {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        smoothness: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        lambda: f64,
        /// Defaults to ⌊(T★−1)/(2q)⌋.
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, default_value_t = 400)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
        #[arg(long)]
        float_mode: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the decay exponent from a sweep CSV.
    Rate {
        #[arg(long)]
        input: PathBuf,
        /// Restrict the fit to T ≥ this value.
        #[arg(long)]
        min_t: Option<f64>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Run { o, seed } => {
            let cfg = o.load()?;
            let prob = cfg.problem.build()?;
            let nm = cfg.noise.build()?;
            let spec = cfg.optimizer.build()?;
            let t = cfg.horizons[0];
            let tr = run(&prob, &nm, &spec, t, seed)?;
            let path = cfg.output_root().join("trajectory.csv");
            write_trajectory_csv(&path, &o.run_id, seed, &tr)?;
            println!("{}", path.display());
        }
        Cmd::Sweep { o } => {
            let cfg = o.load()?;
            let sweep = monte_carlo(&cfg)?;
            for p in emit_sweep(&cfg.output_root(), &o.run_id, &sweep, None)? {
                println!("{}", p.display());
            }
        }
        Cmd::Verify {
            config,
            matrix,
            horizon,
            matrix_seeds,
            seeds,
            base_seed,
            horizons,
            theorem,
            certificate_scale,
            out,
            run_id,
        } => {
            let root = out.clone().unwrap_or_else(output_root);
            if matrix {
                let cells = default_matrix(horizon, matrix_seeds);
                let rep = run_matrix(&cells, base_seed.unwrap_or(0))?;
                let path = root.join("verify_matrix.json");
                write_json(&path, &rep)?;
                println!("{}", path.display());
                if !rep.pass {
                    bail!("{} trajectory check(s) failed", rep.n_failures);
                }
                return Ok(());
            }
            let path = config.context("verify needs --config or --matrix")?;
            let mut cfg = RunConfig::load(&path)?;
            if let Some(n) = seeds {
                cfg.n_seeds = n;
            }
            if let Some(s) = base_seed {
                cfg.base_seed = s;
            }
            if let Some(h) = horizons {
                cfg.horizons = h;
            }
            if let Some(t) = theorem {
                let th: TheoremId = serde_json::from_value(serde_json::Value::String(t.clone()))
                    .with_context(|| format!("unknown theorem {t}"))?;
                cfg.theorem = Some(th);
            }
            if let Some(c) = certificate_scale {
                cfg.certificate_scale = c;
            }
            if out.is_some() {
                cfg.out_dir = out;
            }
            cfg.validate()?;
            let (sweep, reports) = verify_bounds(&cfg)?;
            for p in emit_sweep(&cfg.output_root(), &run_id, &sweep, Some(&reports))? {
                println!("{}", p.display());
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                bail!("{failed} certificate(s) violated");
            }
        }
        Cmd::LbDemo {
            delta,
            smoothness,
            p,
            sigma,
            eps,
            gamma,
            lambda,
            horizon,
            seeds,
            base_seed,
            float_mode,
            out,
        } => {
            let cfg = LbDemoConfig {
                delta,
                smoothness,
                p,
                sigma,
                eps,
                gamma,
                lambda,
                x1: 0.0,
                horizon,
                seeds,
                base_seed,
                float_mode,
            };
            let res = lb_demo(&cfg)?;
            let s = &res.summary;
            println!(
                "q={} T*={} T={} stalled={}/{} mean_metric={} grid_violations={}",
                s.q, s.t_star, s.horizon, s.n_stalled, s.n_seeds, s.mean_metric, s.grid_violations
            );
            for p in emit_lb(&out.unwrap_or_else(output_root), &res)? {
                println!("{}", p.display());
            }
        }
        Cmd::Rate { input, min_t } => {
            let mut pts = read_sweep_points(&input)?;
            if let Some(m) = min_t {
                pts.retain(|(t, _)| *t >= m);
            }
            let fit = fit_rate(&pts)?;
            println!("{}", serde_json::to_string_pretty(&fit)?);
        }
    }
    Ok(())
}
