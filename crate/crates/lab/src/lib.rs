//! Experiment harness for `htopt-core`: JSON configs, seeded Monte Carlo
//! sweeps, rate fits, bound verification, the stall demo and CSV/JSON output.
//!
//! Sweep cells `(T, seed)` run in parallel; results are collected in
//! `(T, seed)` order so output bytes do not depend on scheduling.

pub mod config;
pub mod emit;
pub mod fit;
pub mod lbdemo;
pub mod monte_carlo;
pub mod verify;

pub use config::{output_root, RunConfig};
pub use fit::{fit_rate, Fit};
pub use monte_carlo::{monte_carlo, SweepResult};
pub use verify::{verify_bounds, BoundReport};
