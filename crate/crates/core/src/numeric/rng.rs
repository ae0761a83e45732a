//! Seeded, serializable random number generation.
//!
//! The generator is PCG-XSL-RR 128/64 (`rand_pcg::Pcg64`): a 128-bit LCG with
//! multiplier `0x2360ED051FC65DA44385DF649FCCF645` whose output is the xor of
//! the state halves rotated right by the top six bits. A 64-bit seed expands to
//! the 128-bit state and the 128-bit stream selector through four consecutive
//! SplitMix64 outputs (`state = s0 << 64 | s1`, `stream = s2 << 64 | s3`).
//!
//! Child streams come from [`SeededRng::split`]: the child seed is
//! `splitmix64_mix(seed ^ fnv1a64(label))`, so it depends only on the parent's
//! seed and the label, never on how much of the parent stream was consumed.

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub(crate) fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3))
}

#[derive(Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeededRng {
    seed: u64,
    inner: Pcg64,
}

impl std::fmt::Debug for SeededRng {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeededRng").field("seed", &self.seed).finish_non_exhaustive()
    }
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_add(GOLDEN_GAMMA);
            u128::from(splitmix64_mix(x))
        };
        let state = (next() << 64) | next();
        let stream = (next() << 64) | next();
        Self { seed, inner: Pcg64::new(state, stream) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream determined by `(seed, label)`.
    pub fn split(&self, label: &str) -> Self {
        Self::new(splitmix64_mix(self.seed ^ fnv1a64(label.as_bytes())))
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// True with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard normal conditioned on `|z| <= limit` (rejection sampling).
    pub fn truncated_normal(&mut self, limit: f64) -> f64 {
        loop {
            let z = self.standard_normal();
            if z.abs() <= limit {
                return z;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
