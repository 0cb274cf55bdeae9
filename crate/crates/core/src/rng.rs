//! Counter-based seeding of per-series random streams.
//!
//! Each (stage, series) pair owns an independent generator whose seed is a
//! pure function of `(master_seed, augmenter_index, series_index)`. Nothing
//! depends on the order tasks run in, so parallel and serial execution draw
//! exactly the same numbers.
//!
//! Construction (stable within a major version):
//!
//! ```text
//! h0 = mix(master_seed + GOLDEN)
//! h1 = mix(h0 ^ (augmenter_index + 1) * GOLDEN)
//! h2 = mix(h1 ^ (series_index + 1) * STREAM)
//! seed words w_k = mix(h2 + k * GOLDEN), k = 0..4
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. The four words seed a ChaCha8
//! generator.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Coordinates of one random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedContext {
    pub master_seed: u64,
    /// Position of the augmenter in its pipeline (0 for standalone calls).
    pub augmenter_index: usize,
    /// Position of the series in its batch.
    pub series_index: usize,
}

impl SeedContext {
    pub fn new(master_seed: u64, augmenter_index: usize, series_index: usize) -> Self {
        Self {
            master_seed,
            augmenter_index,
            series_index,
        }
    }

    pub fn key(&self) -> [u8; 32] {
        let h0 = mix(self.master_seed.wrapping_add(GOLDEN));
        let h1 = mix(h0 ^ (self.augmenter_index as u64).wrapping_add(1).wrapping_mul(GOLDEN));
        let h2 = mix(h1 ^ (self.series_index as u64).wrapping_add(1).wrapping_mul(STREAM));
        let mut key = [0u8; 32];
        for (k, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = mix(h2.wrapping_add((k as u64).wrapping_mul(GOLDEN)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        key
    }
}

/// The random stream owned by one (stage, series) task.
#[derive(Debug, Clone)]
pub struct SeriesRng(ChaCha8Rng);

impl SeriesRng {
    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    /// Uniform in `[-a, a)`.
    #[inline]
    pub fn uniform_sym(&mut self, a: f64) -> f64 {
        a * (2.0 * self.uniform() - 1.0)
    }

    /// Standard normal draw.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Uniform integer in `0..n`; `n` must be nonzero.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    /// Fair coin, returning `1.0` or `-1.0`.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.0.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }
}

impl RngCore for SeriesRng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Derives the generator for `ctx`.
pub fn derive_stream(ctx: SeedContext) -> SeriesRng {
    SeriesRng(ChaCha8Rng::from_seed(ctx.key()))
}
