//! CSV and JSON output.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use htopt_core::Trajectory;
use serde::Serialize;

use crate::monte_carlo::{Aggregate, SweepResult};
use crate::verify::BoundReport;

pub const SWEEP_HEADER: [&str; 6] = [
    "T",
    "n_seeds",
    "n_diverged",
    "metric_mean",
    "metric_se",
    "metric_ci95",
];

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    csv::Writer::from_path(path).with_context(|| format!("opening {}", path.display()))
}

/// Shortest representation that parses back to the same `f64`.
fn f(x: f64) -> String {
    format!("{x:?}")
}

/// Aggregate rows; with `bounds`, adds `rhs_value` and `pass` per row.
pub fn write_sweep_csv(
    path: &Path,
    aggregates: &[Aggregate],
    bounds: Option<&[BoundReport]>,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if bounds.is_some() {
        header.extend(["rhs_value", "pass"]);
    }
    w.write_record(&header)?;
    for a in aggregates {
        let mut row = vec![
            a.t.to_string(),
            a.n_seeds.to_string(),
            a.n_diverged.to_string(),
            f(a.metric_mean),
            f(a.metric_se),
            f(a.metric_ci95),
        ];
        if let Some(b) = bounds {
            let r = b
                .iter()
                .find(|r| r.t == a.t)
                .with_context(|| format!("no bound report for T = {}", a.t))?;
            row.push(f(r.rhs_value));
            row.push(r.pass.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per `(T, seed)`.
pub fn write_cells_csv(path: &Path, run_id: &str, sweep: &SweepResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["run_id", "T", "seed", "metric", "diverged"])?;
    for c in &sweep.cells {
        w.write_record([
            run_id.to_string(),
            c.t.to_string(),
            c.seed.to_string(),
            c.metric.map(f).unwrap_or_default(),
            c.diverged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Full per-step dump of one trajectory.
pub fn write_trajectory_csv(path: &Path, run_id: &str, seed: u64, tr: &Trajectory) -> Result<()> {
    let mut w = writer(path)?;
    let mut header: Vec<String> = ["run_id", "T", "seed", "t", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for (name, width) in [
        ("x", tr.dim),
        ("grad", tr.dim),
        ("g", tr.dim),
        ("xi", tr.dim),
        ("v", tr.v_width),
        ("step", tr.step_width),
    ] {
        header.extend((0..width).map(|i| format!("{name}_{i}")));
    }
    w.write_record(&header)?;
    for t in 1..=tr.len() {
        let mut row = vec![
            run_id.to_string(),
            tr.meta.horizon.to_string(),
            seed.to_string(),
            t.to_string(),
            f(tr.f[t - 1]),
        ];
        for part in [
            tr.x_at(t),
            tr.grad_at(t),
            tr.g_at(t),
            tr.xi_at(t),
            tr.v_at(t),
            tr.step_at(t),
        ] {
            row.extend(part.iter().map(|v| f(*v)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

/// Writes `sweep.csv`, `cells.csv` and `sweep.json` under `dir`.
pub fn emit_sweep(
    dir: &Path,
    run_id: &str,
    sweep: &SweepResult,
    bounds: Option<&[BoundReport]>,
) -> Result<Vec<PathBuf>> {
    let paths = [
        dir.join("sweep.csv"),
        dir.join("cells.csv"),
        dir.join("sweep.json"),
    ];
    write_sweep_csv(&paths[0], &sweep.aggregates, bounds)?;
    write_cells_csv(&paths[1], run_id, sweep)?;
    #[derive(Serialize)]
    struct Tree<'a> {
        run_id: &'a str,
        #[serde(flatten)]
        sweep: &'a SweepResult,
        #[serde(skip_serializing_if = "Option::is_none")]
        bounds: Option<&'a [BoundReport]>,
    }
    write_json(
        &paths[2],
        &Tree {
            run_id,
            sweep,
            bounds,
        },
    )?;
    Ok(paths.to_vec())
}

/// `(T, metric_mean)` pairs from a sweep CSV.
pub fn read_sweep_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let h = r.headers()?.clone();
    let col = |name: &str| {
        h.iter()
            .position(|c| c == name)
            .with_context(|| format!("missing column {name}"))
    };
    let (ti, mi) = (col("T")?, col("metric_mean")?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        out.push((rec[ti].parse()?, rec[mi].parse()?));
    }
    Ok(out)
}
