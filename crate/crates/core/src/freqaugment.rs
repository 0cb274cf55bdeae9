//! Spectrum-level augmenters: amplitude-phase perturbation and frequency
//! masking.
//!
//! Time-domain input goes through a real FFT, is modified in the half
//! spectrum and comes back through the inverse FFT. The half-spectrum
//! layout keeps the output real provided the DC and Nyquist bins stay real,
//! so those two bins only ever receive magnitude noise.

use serde::{Deserialize, Serialize};

use crate::augment::SeriesAugmenter;
use crate::error::{Error, Result};
use crate::freqtransform::{half_len, plan, Complex64};
use crate::rng::SeriesRng;

/// Gaussian noise on the polar magnitude (`sigma_amp`, absolute units) and
/// angle (`sigma_phase`, radians) of every bin. Magnitudes are clipped at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudePhase {
    pub sigma_amp: f64,
    pub sigma_phase: f64,
}

impl AmplitudePhase {
    fn is_noop(&self) -> bool {
        self.sigma_amp == 0.0 && self.sigma_phase == 0.0
    }

    /// Perturbs a half spectrum of a length-`len` series in place.
    pub fn perturb_spectrum(&self, spectrum: &mut [Complex64], len: usize, rng: &mut SeriesRng) {
        if self.is_noop() {
            return;
        }
        let nyquist = len.is_multiple_of(2).then_some(len / 2);
        for (k, bin) in spectrum.iter_mut().enumerate() {
            let (da, dp) = (rng.normal(), rng.normal());
            let (r, theta) = bin.to_polar();
            let r = (r + self.sigma_amp * da).max(0.0);
            *bin = if k == 0 || Some(k) == nyquist {
                let sign = if bin.re < 0.0 { -1.0 } else { 1.0 };
                Complex64::new(sign * r, 0.0)
            } else {
                Complex64::from_polar(r, theta + self.sigma_phase * dp)
            };
        }
    }
}

impl SeriesAugmenter for AmplitudePhase {
    fn name(&self) -> &'static str {
        "amplitude_phase"
    }

    fn validate(&self) -> Result<()> {
        for (field, v) in [("sigma_amp", self.sigma_amp), ("sigma_phase", self.sigma_phase)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    self.name(),
                    format!("{field} must be finite and non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        if self.is_noop() {
            out.copy_from_slice(x);
            return;
        }
        let p = plan(x.len());
        let mut spec = vec![Complex64::default(); half_len(x.len())];
        p.rfft(x, &mut spec);
        self.perturb_spectrum(&mut spec, x.len(), rng);
        p.irfft(&spec, out);
    }
}

/// Zeroes a contiguous band of `width` half-spectrum bins. The band centre
/// is drawn uniformly over all bins; a band that would run past either end
/// of the spectrum is shifted inside it, so exactly `width` bins are
/// suppressed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyMask {
    pub width: usize,
}

impl FrequencyMask {
    /// Bin range masked for centre `centre` in a spectrum of `bins` bins.
    pub fn band(&self, centre: usize, bins: usize) -> std::ops::Range<usize> {
        let lo = centre
            .saturating_sub(self.width / 2)
            .min(bins.saturating_sub(self.width));
        lo..(lo + self.width).min(bins)
    }

    /// Masks a half spectrum in place.
    pub fn mask_spectrum(&self, spectrum: &mut [Complex64], rng: &mut SeriesRng) {
        if self.width == 0 {
            return;
        }
        let bins = spectrum.len();
        let centre = rng.below(bins);
        for bin in &mut spectrum[self.band(centre, bins)] {
            *bin = Complex64::default();
        }
    }
}

impl SeriesAugmenter for FrequencyMask {
    fn name(&self) -> &'static str {
        "frequency_mask"
    }

    fn validate(&self) -> Result<()> {
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let bins = half_len(len);
        if self.width > bins {
            return Err(Error::param(
                self.name(),
                format!("width {} exceeds the {bins} spectrum bins of length {len}", self.width),
            ));
        }
        Ok(())
    }

    fn apply(&self, x: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        if self.width == 0 {
            out.copy_from_slice(x);
            return;
        }
        let p = plan(x.len());
        let mut spec = vec![Complex64::default(); half_len(x.len())];
        p.rfft(x, &mut spec);
        self.mask_spectrum(&mut spec, rng);
        p.irfft(&spec, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_stream, SeedContext};

    fn rng(seed: u64) -> SeriesRng {
        derive_stream(SeedContext::new(seed, 0, 0))
    }

    #[test]
    fn band_is_contiguous_and_clipped() {
        let m = FrequencyMask { width: 4 };
        assert_eq!(m.band(0, 10), 0..4);
        assert_eq!(m.band(5, 10), 3..7);
        assert_eq!(m.band(9, 10), 6..10);
        assert_eq!(FrequencyMask { width: 10 }.band(3, 10), 0..10);
        assert_eq!(FrequencyMask { width: 0 }.band(3, 10), 3..3);
        assert_eq!(FrequencyMask { width: 3 }.band(4, 10), 3..6);
    }

    #[test]
    fn mask_zeroes_exactly_width_bins() {
        let spec: Vec<Complex64> = (0..17).map(|k| Complex64::new(k as f64 + 1.0, 0.5)).collect();
        for seed in 0..50 {
            let mut s = spec.clone();
            FrequencyMask { width: 5 }.mask_spectrum(&mut s, &mut rng(seed));
            let zeros: Vec<usize> = (0..s.len()).filter(|&k| s[k] == Complex64::default()).collect();
            assert_eq!(zeros.len(), 5);
            assert!(zeros.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }

    #[test]
    fn app_keeps_edge_bins_real() {
        let len = 16;
        let mut spec: Vec<Complex64> = (0..half_len(len)).map(|k| Complex64::new(-3.0 + k as f64, 0.0)).collect();
        spec[3].im = 2.0;
        AmplitudePhase { sigma_amp: 0.5, sigma_phase: 1.0 }.perturb_spectrum(&mut spec, len, &mut rng(1));
        assert_eq!(spec[0].im, 0.0);
        assert_eq!(spec[8].im, 0.0);
        assert!(spec[0].re <= 0.0);
    }

    #[test]
    fn app_magnitude_noise_std() {
        // High-magnitude bins keep clipping negligible; sigma_phase = 0
        // leaves angles alone.
        let len = 20_000;
        let bins = half_len(len);
        let spec: Vec<Complex64> = (0..bins).map(|k| Complex64::from_polar(100.0, k as f64 * 0.1)).collect();
        let mut out = spec.clone();
        AmplitudePhase { sigma_amp: 2.0, sigma_phase: 0.0 }.perturb_spectrum(&mut out, len, &mut rng(3));
        let d: Vec<f64> = out.iter().zip(&spec).map(|(a, b)| a.norm() - b.norm()).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        let std = (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (d.len() - 1) as f64).sqrt();
        assert!((std - 2.0).abs() < 0.1, "std {std}");
        for (a, b) in out.iter().zip(&spec).skip(1).take(bins - 2) {
            assert!((a.arg() - b.arg()).abs() < 1e-9);
        }
    }

    #[test]
    fn width_bounds() {
        assert!(FrequencyMask { width: 6 }.check_len(10).is_ok());
        assert!(FrequencyMask { width: 7 }.check_len(10).is_err());
        assert!(AmplitudePhase { sigma_amp: -1.0, sigma_phase: 0.0 }.validate().is_err());
    }
}
