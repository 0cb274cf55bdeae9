//! Time-domain augmenters.
//!
//! `rotate` on a univariate series is a sign flip: the only norm-preserving
//! rotation in one dimension.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::augment::SeriesAugmenter;
use crate::batch::Batch;
use crate::error::{Error, Result};
use crate::rng::SeriesRng;

fn check_scale(augmenter: &'static str, field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(
            augmenter,
            format!("{field} must be finite and non-negative, got {v}"),
        ))
    }
}

/// Linear interpolation of `x` at fractional index `pos` in `[0, len - 1]`.
/// The result is clamped to the two neighbouring samples.
#[inline]
pub(crate) fn interp(x: &[f64], pos: f64) -> f64 {
    let last = x.len() - 1;
    if pos <= 0.0 {
        return x[0];
    }
    let i = pos.floor() as usize;
    if i >= last {
        return x[last];
    }
    let frac = pos - i as f64;
    let (a, b) = (x[i], x[i + 1]);
    if frac == 0.0 {
        return a;
    }
    (a + frac * (b - a)).clamp(a.min(b), a.max(b))
}

fn population_std(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Adds i.i.d. `Normal(0, sigma^2)` noise to every sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jitter {
    pub sigma: f64,
}

impl SeriesAugmenter for Jitter {
    fn name(&self) -> &'static str {
        "jitter"
    }

    fn validate(&self) -> Result<()> {
        check_scale(self.name(), "sigma", self.sigma)
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        add_gaussian(self.sigma, x, out, rng);
    }
}

fn add_gaussian(sigma: f64, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
    if sigma == 0.0 {
        out.copy_from_slice(x);
        return;
    }
    for (y, &v) in out.iter_mut().zip(x) {
        *y = v + sigma * rng.normal();
    }
}

/// Multiplies the whole series by one factor drawn from `Normal(1, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scale {
    pub sigma: f64,
}

impl SeriesAugmenter for Scale {
    fn name(&self) -> &'static str {
        "scale"
    }

    fn validate(&self) -> Result<()> {
        check_scale(self.name(), "sigma", self.sigma)
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        if self.sigma == 0.0 {
            out.copy_from_slice(x);
            return;
        }
        let s = 1.0 + self.sigma * rng.normal();
        for (y, &v) in out.iter_mut().zip(x) {
            *y = s * v;
        }
    }
}

/// Negates the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotate;

impl SeriesAugmenter for Rotate {
    fn name(&self) -> &'static str {
        "rotate"
    }

    fn validate(&self) -> Result<()> {
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], _rng: &mut SeriesRng) {
        for (y, &v) in out.iter_mut().zip(x) {
            *y = -v;
        }
    }
}

/// Splits the series into `n_segments` contiguous chunks and shuffles their
/// order. The first `len % n_segments` chunks are one sample longer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Permute {
    pub n_segments: usize,
}

impl SeriesAugmenter for Permute {
    fn name(&self) -> &'static str {
        "permute"
    }

    fn validate(&self) -> Result<()> {
        if self.n_segments == 0 {
            return Err(Error::param(self.name(), "n_segments must be at least 1"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if self.n_segments > len {
            return Err(Error::param(
                self.name(),
                format!("n_segments {} exceeds series length {len}", self.n_segments),
            ));
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        let n = self.n_segments;
        let (base, rem) = (x.len() / n, x.len() % n);
        let bounds = |s: usize| {
            let start = s * base + s.min(rem);
            (start, start + base + usize::from(s < rem))
        };
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.below(i + 1));
        }
        let mut pos = 0;
        for s in order {
            let (a, b) = bounds(s);
            out[pos..pos + (b - a)].copy_from_slice(&x[a..b]);
            pos += b - a;
        }
    }
}

/// Contiguous window of `size` samples with a uniformly drawn start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crop {
    pub size: usize,
}

impl SeriesAugmenter for Crop {
    fn name(&self) -> &'static str {
        "crop"
    }

    fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::param(self.name(), "size must be at least 1"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if self.size > len {
            return Err(Error::param(
                self.name(),
                format!("size {} exceeds series length {len}", self.size),
            ));
        }
        Ok(())
    }

    fn output_len(&self, _len: usize) -> usize {
        self.size
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        let start = rng.below(x.len() - self.size + 1);
        out.copy_from_slice(&x[start..start + self.size]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reverse;

impl SeriesAugmenter for Reverse {
    fn name(&self) -> &'static str {
        "reverse"
    }

    fn validate(&self) -> Result<()> {
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], _rng: &mut SeriesRng) {
        for (y, &v) in out.iter_mut().zip(x.iter().rev()) {
            *y = v;
        }
    }
}

/// Linear-interpolation resampling to `target_len` samples. Both endpoints
/// are kept exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resize {
    pub target_len: usize,
}

impl SeriesAugmenter for Resize {
    fn name(&self) -> &'static str {
        "resize"
    }

    fn validate(&self) -> Result<()> {
        if self.target_len < 2 {
            return Err(Error::param(self.name(), "target_len must be at least 2"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len < 2 {
            return Err(Error::param(self.name(), "input series needs at least 2 samples"));
        }
        Ok(())
    }

    fn output_len(&self, _len: usize) -> usize {
        self.target_len
    }

    fn apply(&self, x: &[f64], out: &mut [f64], _rng: &mut SeriesRng) {
        let span = (x.len() - 1) as f64;
        let denom = (self.target_len - 1) as f64;
        for (t, y) in out.iter_mut().enumerate() {
            *y = interp(x, t as f64 * span / denom);
        }
    }
}

/// Snaps every sample to the nearest of `n_levels` equally spaced levels
/// spanning the series' range. Midpoints go to the lower level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantize {
    pub n_levels: usize,
}

impl SeriesAugmenter for Quantize {
    fn name(&self) -> &'static str {
        "quantize"
    }

    fn validate(&self) -> Result<()> {
        if self.n_levels < 2 {
            return Err(Error::param(self.name(), "n_levels must be at least 2"));
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], _rng: &mut SeriesRng) {
        let (lo, hi) = x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if lo == hi {
            out.copy_from_slice(x);
            return;
        }
        let top = self.n_levels - 1;
        let step = (hi - lo) / top as f64;
        for (y, &v) in out.iter_mut().zip(x) {
            let k = (((v - lo) / step - 0.5).ceil().max(0.0) as usize).min(top);
            *y = if k == top { hi } else { lo + k as f64 * step };
        }
    }
}

/// Adds a smooth random drift: Gaussian anchor values at `n_points` evenly
/// spaced positions, linearly interpolated, shifted to start at zero and
/// rescaled so the largest excursion is exactly `max_drift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drift {
    pub max_drift: f64,
    #[serde(default = "Drift::default_points")]
    pub n_points: usize,
}

impl Drift {
    fn default_points() -> usize {
        5
    }
}

impl SeriesAugmenter for Drift {
    fn name(&self) -> &'static str {
        "drift"
    }

    fn validate(&self) -> Result<()> {
        check_scale(self.name(), "max_drift", self.max_drift)?;
        if self.n_points < 2 {
            return Err(Error::param(self.name(), "n_points must be at least 2"));
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        let len = x.len();
        if self.max_drift == 0.0 || len == 1 {
            out.copy_from_slice(x);
            return;
        }
        let anchors: Vec<f64> = (0..self.n_points).map(|_| rng.normal()).collect();
        let ratio = (self.n_points - 1) as f64 / (len - 1) as f64;
        for (t, y) in out.iter_mut().enumerate() {
            *y = interp(&anchors, t as f64 * ratio) - anchors[0];
        }
        let peak = out.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let scale = if peak > 0.0 { self.max_drift / peak } else { 0.0 };
        for (y, &v) in out.iter_mut().zip(x) {
            *y = v + *y * scale;
        }
    }
}

/// Noise families for [`Noise`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseKind {
    /// i.i.d. `Uniform(-half_width, half_width)`.
    Uniform { half_width: f64 },
    /// i.i.d. `Normal(0, sigma^2)`.
    Gaussian { sigma: f64 },
    /// `count` spikes of `±magnitude * std(x)` at distinct positions. A
    /// constant series uses a std of 1.
    Spike { count: usize, magnitude: f64 },
    /// Linear ramp from 0 to `±max_slope` over the series.
    SlopeTrend { max_slope: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    pub noise: NoiseKind,
}

impl SeriesAugmenter for Noise {
    fn name(&self) -> &'static str {
        "noise"
    }

    fn validate(&self) -> Result<()> {
        let name = self.name();
        match self.noise {
            NoiseKind::Uniform { half_width } => check_scale(name, "half_width", half_width),
            NoiseKind::Gaussian { sigma } => check_scale(name, "sigma", sigma),
            NoiseKind::Spike { magnitude, .. } => check_scale(name, "magnitude", magnitude),
            NoiseKind::SlopeTrend { max_slope } => check_scale(name, "max_slope", max_slope),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        match self.noise {
            NoiseKind::Spike { count, .. } if count > len => Err(Error::param(
                self.name(),
                format!("spike count {count} exceeds series length {len}"),
            )),
            _ => Ok(()),
        }
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        out.copy_from_slice(x);
        match self.noise {
            NoiseKind::Uniform { half_width } if half_width > 0.0 => {
                for y in out.iter_mut() {
                    *y += rng.uniform_sym(half_width);
                }
            }
            NoiseKind::Gaussian { sigma } => add_gaussian(sigma, x, out, rng),
            NoiseKind::Spike { count, magnitude } if count > 0 && magnitude > 0.0 => {
                let std = match population_std(x) {
                    s if s > 0.0 => s,
                    _ => 1.0,
                };
                for pos in index::sample(rng, x.len(), count).into_iter() {
                    out[pos] += rng.sign() * magnitude * std;
                }
            }
            NoiseKind::SlopeTrend { max_slope } if max_slope > 0.0 && x.len() > 1 => {
                let slope = rng.sign() * max_slope / (x.len() - 1) as f64;
                for (t, y) in out.iter_mut().enumerate() {
                    *y += slope * t as f64;
                }
            }
            _ => {}
        }
    }
}

/// Repeats every series `times` times in a row, growing the batch. Batch
/// level only, and always serial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Repeat {
    pub times: usize,
}

impl Repeat {
    pub fn repeat_batch(&self, batch: &Batch) -> Batch {
        let out = self.repeat_rows(batch.as_flat(), batch.len());
        Batch::from_parts_unchecked(out, batch.n() * self.times, batch.len())
    }

    pub(crate) fn repeat_rows(&self, data: &[f64], len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(data.len() * self.times);
        for series in data.chunks_exact(len) {
            for _ in 0..self.times {
                out.extend_from_slice(series);
            }
        }
        out
    }
}

impl SeriesAugmenter for Repeat {
    fn name(&self) -> &'static str {
        "repeat"
    }

    fn validate(&self) -> Result<()> {
        if self.times == 0 {
            return Err(Error::param(self.name(), "times must be at least 1"));
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], _rng: &mut SeriesRng) {
        out.copy_from_slice(x);
    }
}
