//! Counter-based random streams.
//!
//! A [`StreamKey`] names an independent experiment (`seed`, `run`, `lane`,
//! `domain`); [`StreamKey::at`] positions a ChaCha8 keystream at a given step.
//! Draws at step `t` therefore depend only on the key and `t`, never on what
//! other runs or steps consumed, which keeps parallel sweeps byte-reproducible.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Domain tags keep streams used for different purposes disjoint.
pub mod domain {
    pub const NOISE: u64 = 0x6e6f_6973_6500_0001;
    pub const BERNOULLI: u64 = 0x6265_726e_0000_0002;
    pub const SAMPLING: u64 = 0x7361_6d70_0000_0003;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub run: u64,
    pub lane: u64,
    pub domain: u64,
}

impl StreamKey {
    pub const fn new(seed: u64, run: u64) -> Self {
        Self {
            seed,
            run,
            lane: 0,
            domain: domain::NOISE,
        }
    }

    pub const fn with_lane(mut self, lane: u64) -> Self {
        self.lane = lane;
        self
    }

    pub const fn with_domain(mut self, domain: u64) -> Self {
        self.domain = domain;
        self
    }

    /// Generator for step `step` of this stream.
    pub fn at(&self, step: u64) -> StepRng {
        let mut seed = [0u8; 32];
        seed[0..8].copy_from_slice(&self.seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.run.to_le_bytes());
        seed[16..24].copy_from_slice(&self.lane.to_le_bytes());
        seed[24..32].copy_from_slice(&self.domain.to_le_bytes());
        let mut inner = ChaCha8Rng::from_seed(seed);
        inner.set_stream(step);
        StepRng { inner }
    }
}

impl From<u64> for StreamKey {
    fn from(seed: u64) -> Self {
        StreamKey::new(seed, 0)
    }
}

/// The generator handed out for a single step.
#[derive(Debug, Clone)]
pub struct StepRng {
    inner: ChaCha8Rng,
}

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

impl StepRng {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn uniform_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * TWO_POW_NEG_53
    }

    /// `true` with probability `q`.
    #[inline]
    pub fn bernoulli(&mut self, q: f64) -> bool {
        self.uniform() < q
    }

    /// `+1.0` or `-1.0` with equal probability.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
