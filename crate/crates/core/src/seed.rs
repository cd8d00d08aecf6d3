//! Counter-based seed splitting and the per-shot generator.
//!
//! Everything random in [`crate::bench`] is derived from one 64-bit seed
//! through the functions below, so results are independent of how work is
//! scheduled across threads. The algorithms are fixed bit for bit:
//!
//! ```text
//! GAMMA            = 0x9E3779B97F4A7C15
//! mix64(z)         : z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                    z ^ (z >> 31)                      (wrapping arithmetic)
//! stream_key(k, i) = mix64(k + (i + 1) * GAMMA)         (wrapping arithmetic)
//!
//! circuit_seed(seed, i)        = stream_key(seed, i)
//! shot_seed(circuit_seed, j)   = stream_key(mix64(circuit_seed ^ SHOT_DOMAIN), j)
//! cell_seed(seed, w, d)        = stream_key(stream_key(seed ^ CELL_DOMAIN, w), d)
//! ```
//!
//! `stream_key(k, i)` is the `i`-th output of a SplitMix64 generator started at
//! state `k`, which makes [`SplitMix64`] and the splitting rule one family.
//! Uniform doubles take the top 53 bits: `(x >> 11) * 2^-53`.

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SHOT_DOMAIN: u64 = 0x5348_4F54_5348_4F54;
const CELL_DOMAIN: u64 = 0x4345_4C4C_4345_4C4C;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn stream_key(key: u64, index: u64) -> u64 {
    mix64(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Seed of the `index`-th circuit drawn under `seed`.
pub fn circuit_seed(seed: u64, index: u64) -> u64 {
    stream_key(seed, index)
}

/// Seed of shot `shot` within the circuit seeded by `circuit_seed`.
pub fn shot_seed(circuit_seed: u64, shot: u64) -> u64 {
    stream_key(mix64(circuit_seed ^ SHOT_DOMAIN), shot)
}

/// Seed of the benchmark grid cell at `(width, depth)`.
pub fn cell_seed(seed: u64, width: u64, depth: u64) -> u64 {
    stream_key(stream_key(seed ^ CELL_DOMAIN, width), depth)
}

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `p`.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform in `0..n` by widening multiply with rejection. `n` must be > 0.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }
}
