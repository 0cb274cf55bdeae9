//! Seeded synthetic datasets for benchmarks and tests.

use rayon::prelude::*;

use crate::batch::Batch;
use crate::rng::{derive_stream, SeedContext};

// Stream index reserved for data generation, far from any pipeline stage.
const GENERATOR_STREAM: usize = usize::MAX;

/// `n` Gaussian random walks of length `len`: cumulative sums of standard
/// normal steps starting from the first step.
pub fn gaussian_walks(n: usize, len: usize, seed: u64) -> Batch {
    let mut data = vec![0.0; n * len];
    data.par_chunks_mut(len).enumerate().for_each(|(i, row)| {
        let mut rng = derive_stream(SeedContext::new(seed, GENERATOR_STREAM, i));
        let mut acc = 0.0;
        for v in row {
            acc += rng.normal();
            *v = acc;
        }
    });
    Batch::from_flat(data, len).expect("walks are finite")
}

/// `n` smooth profiles of length `len`: a few low-frequency sinusoids with
/// random amplitude and phase plus a little Gaussian noise. Closer to real
/// sensor or outline data than random walks.
pub fn smooth_profiles(n: usize, len: usize, seed: u64) -> Batch {
    let mut data = vec![0.0; n * len];
    data.par_chunks_mut(len).enumerate().for_each(|(i, row)| {
        let mut rng = derive_stream(SeedContext::new(seed, GENERATOR_STREAM - 1, i));
        let components: Vec<(f64, f64, f64)> = (1..=4)
            .map(|h| {
                let amp = (1.0 + 0.3 * rng.normal()) / h as f64;
                let phase = std::f64::consts::TAU * rng.uniform();
                (h as f64 * (1.0 + 0.5 * rng.uniform()), amp, phase)
            })
            .collect();
        for (t, v) in row.iter_mut().enumerate() {
            let u = std::f64::consts::TAU * t as f64 / len as f64;
            *v = components.iter().map(|(f, a, p)| a * (f * u + p).sin()).sum::<f64>()
                + 0.02 * rng.normal();
        }
    });
    Batch::from_flat(data, len).expect("profiles are finite")
}

/// `n` profiles made of two Gaussian bumps with random centre, width and
/// height on a flat baseline, plus Gaussian noise of standard deviation 0.02.
/// Shaped like the outline and motion classes common in public archives.
pub fn bump_profiles(n: usize, len: usize, seed: u64) -> Batch {
    let mut data = vec![0.0; n * len];
    let denom = len.saturating_sub(1).max(1) as f64;
    data.par_chunks_mut(len).enumerate().for_each(|(i, row)| {
        let mut rng = derive_stream(SeedContext::new(seed, GENERATOR_STREAM - 2, i));
        let bumps: Vec<(f64, f64, f64)> = (0..2)
            .map(|_| (0.2 + 0.6 * rng.uniform(), 0.03 + 0.1 * rng.uniform(), 0.5 + rng.uniform()))
            .collect();
        for (t, v) in row.iter_mut().enumerate() {
            let u = t as f64 / denom;
            *v = bumps
                .iter()
                .map(|(c, w, a)| a * (-(u - c).powi(2) / (2.0 * w * w)).exp())
                .sum::<f64>()
                + 0.02 * rng.normal();
        }
    });
    Batch::from_flat(data, len).expect("bumps are finite")
}
