//! Seeded, splittable randomness.
//!
//! Every run owns a [`SeededRng`] keyed by `(seed, run)`. Each consumer
//! (the reward stream of one arm, the noise of one arm's mechanism, ...)
//! draws from its own ChaCha stream, so adding an arm or switching the policy
//! never shifts the numbers another consumer sees.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifies an independent substream inside one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substream {
    /// Rewards of one arm: the n-th pull of the arm reads the n-th draw.
    Reward(usize),
    /// Mechanism noise attached to one arm.
    Noise(usize),
    /// Anything else a policy needs, tagged by the caller.
    Aux(u32),
}

impl Substream {
    fn id(self) -> u64 {
        match self {
            Substream::Reward(arm) => arm as u64 & 0xFFFF_FFFF,
            Substream::Noise(arm) => (1 << 32) | (arm as u64 & 0xFFFF_FFFF),
            Substream::Aux(tag) => (2 << 32) | u64::from(tag),
        }
    }
}

/// Factory for the substreams of one seeded run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededRng {
    seed: u64,
    run: u64,
}

impl SeededRng {
    pub fn new(seed: u64, run: u64) -> Self {
        Self { seed, run }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn run(&self) -> u64 {
        self.run
    }

    /// Same seed, different run id.
    pub fn with_run(&self, run: u64) -> Self {
        Self { seed: self.seed, run }
    }

    pub fn stream(&self, sub: Substream) -> RngStream {
        let mut seed_state = self.seed;
        let mut run_state = self.run ^ 0x6A09_E667_F3BC_C908;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(&mut seed_state) ^ splitmix64(&mut run_state).rotate_left(17);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(sub.id());
        RngStream { inner }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One independent stream of random numbers.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from the open interval (0, 1); never returns 0 or 1.
    pub fn open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }
}
