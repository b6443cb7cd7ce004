//! Verification kernel for adaptive gradient methods under heavy-tailed noise.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`problems`]: synthetic smooth objectives with known gradients, smoothness
//!   vectors and optimal values.
//! - [`noise`]: zero-mean per-coordinate noise oracles with certified p-th
//!   moments, including finite-support models for exact expectations.
//! - [`optimizers`]: AdaGrad, AdaGrad-Norm and reference baselines, with full
//!   trajectory recording.
//! - [`lower_bound`]: the one-dimensional adversarial instance for AdaGrad, its
//!   Bernoulli oracle and the stall experiment.
//! - [`theory`]: bound calculators, per-path inequality checkers, exact
//!   single-step descent checks and explicit-constant certificates.
//!
//! Randomness comes from [`rng::StreamKey`], a counter-based stream keyed by
//! `(seed, run, lane)` and the step index, so every draw is reproducible and
//! independent of evaluation order.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod lower_bound;
pub mod math;
pub mod noise;
pub mod optimizers;
pub mod problems;
pub mod rng;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use lower_bound::{GridMode, HardInstance, StallPath, StallStats};
pub use noise::{NoiseKind, NoiseModel, Outcome};
pub use optimizers::{
    AdaGradNormState, AdaGradState, Baseline, BaselineState, OptimizerSpec, RunStatus, Trajectory,
};
pub use problems::{AssumptionReport, Objective, Problem};
pub use rng::{StepRng, StreamKey};
