//! Random time warping over the whole series or over one random window.
//!
//! The warp map sends `[0, len - 1]` onto itself. Knots are placed evenly,
//! interior knots are displaced by Gaussian noise scaled by `intensity`
//! times the knot spacing, then sorted and separated by at least
//! [`MIN_KNOT_GAP`]. The map is the piecewise-linear interpolant of the
//! knots, and the output samples the input at the warped positions.

use serde::{Deserialize, Serialize};

use crate::augment::SeriesAugmenter;
use crate::basic::interp;
use crate::error::{Error, Result};
use crate::rng::SeriesRng;

pub const MIN_KNOT_GAP: f64 = 1e-6;

fn default_knots() -> usize {
    4
}

fn default_intensity() -> f64 {
    0.5
}

fn validate_knots(name: &'static str, n_knots: usize, intensity: f64) -> Result<()> {
    if n_knots < 2 {
        return Err(Error::param(name, "n_knots must be at least 2"));
    }
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(Error::param(
            name,
            format!("intensity must be finite and non-negative, got {intensity}"),
        ));
    }
    Ok(())
}

fn check_knot_room(name: &'static str, n_knots: usize, len: usize) -> Result<()> {
    if len > 2 && (n_knots - 1) as f64 * MIN_KNOT_GAP > (len - 1) as f64 {
        return Err(Error::param(name, format!("{n_knots} knots do not fit in {len} samples")));
    }
    Ok(())
}

/// Draws the warp map for a series of length `len`: `map[t]` is the
/// fractional source index of output sample `t`. Strictly increasing, with
/// `map[0] = 0` and `map[len - 1] = len - 1`.
pub fn warp_map(len: usize, n_knots: usize, intensity: f64, rng: &mut SeriesRng) -> Vec<f64> {
    let last = (len - 1) as f64;
    if len <= 2 || intensity == 0.0 {
        return (0..len).map(|t| t as f64).collect();
    }
    let segments = (n_knots - 1) as f64;
    let spacing = last / segments;
    let mut knots: Vec<f64> = (0..n_knots).map(|k| k as f64 * spacing).collect();
    knots[n_knots - 1] = last;
    let interior = 1..n_knots - 1;
    for q in &mut knots[interior.clone()] {
        *q = (*q + intensity * spacing * rng.normal()).clamp(0.0, last);
    }
    knots[interior.clone()].sort_by(f64::total_cmp);
    for k in interior.clone() {
        knots[k] = knots[k].max(knots[k - 1] + MIN_KNOT_GAP);
    }
    for k in interior.rev() {
        knots[k] = knots[k].min(knots[k + 1] - MIN_KNOT_GAP);
    }

    let mut map = Vec::with_capacity(len);
    map.push(0.0);
    for t in 1..len - 1 {
        let u = t as f64 * segments / last;
        let k = (u.floor() as usize).min(n_knots - 2);
        let f = u - k as f64;
        map.push(knots[k] + f * (knots[k + 1] - knots[k]));
    }
    map.push(last);
    debug_assert!(map.windows(2).all(|w| w[1] > w[0]), "warp map not increasing");
    map
}

fn warp_into(x: &[f64], out: &mut [f64], n_knots: usize, intensity: f64, rng: &mut SeriesRng) {
    if intensity == 0.0 || x.len() <= 2 {
        out.copy_from_slice(x);
        return;
    }
    let map = warp_map(x.len(), n_knots, intensity, rng);
    for (y, &pos) in out.iter_mut().zip(&map) {
        *y = interp(x, pos);
    }
}

/// Warps the time axis of the whole series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWarp {
    #[serde(default = "default_knots")]
    pub n_knots: usize,
    #[serde(default = "default_intensity")]
    pub intensity: f64,
}

impl Default for TimeWarp {
    fn default() -> Self {
        Self {
            n_knots: default_knots(),
            intensity: default_intensity(),
        }
    }
}

impl SeriesAugmenter for TimeWarp {
    fn name(&self) -> &'static str {
        "time_warp"
    }

    fn validate(&self) -> Result<()> {
        validate_knots(self.name(), self.n_knots, self.intensity)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        check_knot_room(self.name(), self.n_knots, len)
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        warp_into(x, out, self.n_knots, self.intensity, rng);
    }
}

/// Warps one window of `window_size` samples at a uniformly drawn start.
/// Samples outside the window are copied unchanged; the window's boundary
/// samples are pinned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowWarp {
    #[serde(default = "default_knots")]
    pub n_knots: usize,
    #[serde(default = "default_intensity")]
    pub intensity: f64,
    pub window_size: usize,
}

impl WindowWarp {
    /// Start index of the warped window. Consumes a draw only when more than
    /// one start is possible, so a full-length window matches [`TimeWarp`].
    fn draw_start(&self, len: usize, rng: &mut SeriesRng) -> usize {
        if len > self.window_size {
            rng.below(len - self.window_size + 1)
        } else {
            0
        }
    }
}

impl SeriesAugmenter for WindowWarp {
    fn name(&self) -> &'static str {
        "window_warp"
    }

    fn validate(&self) -> Result<()> {
        validate_knots(self.name(), self.n_knots, self.intensity)?;
        if self.window_size < 2 {
            return Err(Error::param(self.name(), "window_size must be at least 2"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if self.window_size > len {
            return Err(Error::param(
                self.name(),
                format!("window_size {} exceeds series length {len}", self.window_size),
            ));
        }
        check_knot_room(self.name(), self.n_knots, self.window_size)
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        out.copy_from_slice(x);
        if self.intensity == 0.0 {
            return;
        }
        let start = self.draw_start(x.len(), rng);
        let window = start..start + self.window_size;
        warp_into(&x[window.clone()], &mut out[window], self.n_knots, self.intensity, rng);
    }
}
