#![allow(dead_code)]

use chronaug::basic::*;
use chronaug::freqaugment::{AmplitudePhase, FrequencyMask};
use chronaug::warp::{TimeWarp, WindowWarp};
use chronaug::{Augmenter, AugmenterSpec, Complex64};

/// One instance of every augmenter with non-trivial parameters, valid for
/// series of length >= 32.
pub fn all_augmenters() -> Vec<Augmenter> {
    vec![
        Augmenter::Jitter(Jitter { sigma: 0.1 }),
        Augmenter::Scale(Scale { sigma: 0.2 }),
        Augmenter::Rotate(Rotate),
        Augmenter::Permute(Permute { n_segments: 4 }),
        Augmenter::Crop(Crop { size: 20 }),
        Augmenter::Reverse(Reverse),
        Augmenter::Resize(Resize { target_len: 45 }),
        Augmenter::Quantize(Quantize { n_levels: 8 }),
        Augmenter::Drift(Drift { max_drift: 0.7, n_points: 4 }),
        Augmenter::Noise(Noise { noise: NoiseKind::Uniform { half_width: 0.3 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::Gaussian { sigma: 0.3 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::Spike { count: 3, magnitude: 2.0 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::SlopeTrend { max_slope: 1.5 } }),
        Augmenter::Repeat(Repeat { times: 3 }),
        Augmenter::AmplitudePhase(AmplitudePhase { sigma_amp: 0.5, sigma_phase: 0.3 }),
        Augmenter::FrequencyMask(FrequencyMask { width: 4 }),
        Augmenter::TimeWarp(TimeWarp { n_knots: 5, intensity: 0.8 }),
        Augmenter::WindowWarp(WindowWarp { n_knots: 4, intensity: 1.0, window_size: 16 }),
    ]
}

pub fn spec(a: Augmenter, p: f64) -> AugmenterSpec {
    AugmenterSpec::with_probability(a, p).unwrap()
}

/// Textbook DFT, O(L^2), with the twiddle angle reduced modulo L.
pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter().enumerate().fold(Complex64::default(), |acc, (t, &v)| {
                let angle = -2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
                acc + Complex64::from_polar(v, angle)
            })
        })
        .collect()
}

/// Direct orthonormal DCT-II sum.
pub fn naive_dct(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    (0..x.len())
        .map(|k| {
            let s = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            s * x
                .iter()
                .enumerate()
                .map(|(t, &v)| v * (std::f64::consts::PI * (2 * t + 1) as f64 * k as f64 / (2.0 * n)).cos())
                .sum::<f64>()
        })
        .collect()
}

/// Minimum accumulated |a_i - b_j| over every monotone path, by explicit
/// recursion over all paths (no memoisation).
pub fn exhaustive_dtw(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
        let here = (a[i] - b[j]).abs();
        if i + 1 == a.len() && j + 1 == b.len() {
            return here;
        }
        let mut best = f64::INFINITY;
        if i + 1 < a.len() {
            best = best.min(walk(a, b, i + 1, j));
        }
        if j + 1 < b.len() {
            best = best.min(walk(a, b, i, j + 1));
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            best = best.min(walk(a, b, i + 1, j + 1));
        }
        here + best
    }
    walk(a, b, 0, 0)
}

/// A small deterministic LCG so oracles never share code with the library's
/// random streams.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn series(&mut self, len: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..len).map(|_| self.range(lo, hi)).collect()
    }
}
