//! Forward and inverse DCT-II and real-input FFT over batches, plus a
//! reconstruction check.
//!
//! The FFT keeps only the non-redundant half of the spectrum: bins
//! `0..=len/2`, DC first and (for even lengths) Nyquist last. The remaining
//! bins follow from Hermitian symmetry, which is what makes every inverse
//! real-valued. The DCT uses orthonormal scaling so that energy is preserved.
//!
//! Plans are cached per length and shared across threads.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use realfft::num_complex::Complex;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use serde::{Deserialize, Serialize};

use crate::batch::Batch;
use crate::error::{Error, Result};
use crate::exec::zip_rows;

pub type Complex64 = Complex<f64>;

/// Number of half-spectrum bins for a real series of length `len`.
pub fn half_len(len: usize) -> usize {
    len / 2 + 1
}

pub(crate) struct Plan {
    len: usize,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
    /// `exp(-i*pi*k / (2 len))` for `k in 0..len`.
    dct_twiddles: Vec<Complex64>,
}

pub(crate) fn plan(len: usize) -> Arc<Plan> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&len) {
        return Arc::clone(p);
    }
    let mut guard = cache.write().unwrap();
    Arc::clone(guard.entry(len).or_insert_with(|| {
        let mut planner = RealFftPlanner::<f64>::new();
        let dct_twiddles = (0..len)
            .map(|k| Complex64::from_polar(1.0, -PI * k as f64 / (2 * len) as f64))
            .collect();
        Arc::new(Plan {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            dct_twiddles,
        })
    }))
}

impl Plan {
    /// Half spectrum of `x` into `out` (length `half_len(len)`).
    pub(crate) fn rfft(&self, x: &[f64], out: &mut [Complex64]) {
        let mut buf = x.to_vec();
        self.forward
            .process(&mut buf, out)
            .expect("buffer lengths match the plan");
    }

    /// Real series from a half spectrum. DC and Nyquist imaginary parts are
    /// ignored, matching a Hermitian extension.
    pub(crate) fn irfft(&self, spectrum: &[Complex64], out: &mut [f64]) {
        let mut buf = spectrum.to_vec();
        buf[0].im = 0.0;
        if self.len.is_multiple_of(2) {
            buf[self.len / 2].im = 0.0;
        }
        self.inverse
            .process(&mut buf, out)
            .expect("buffer lengths match the plan");
        let scale = 1.0 / self.len as f64;
        out.iter_mut().for_each(|v| *v *= scale);
    }

    /// Orthonormal DCT-II through one real FFT of the even/odd reordered
    /// input.
    pub(crate) fn dct(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len;
        let mut v = vec![0.0; n];
        for (t, &xt) in x.iter().enumerate() {
            let dst = if t % 2 == 0 { t / 2 } else { n - 1 - t / 2 };
            v[dst] = xt;
        }
        let mut spec = vec![Complex64::default(); half_len(n)];
        self.forward
            .process(&mut v, &mut spec)
            .expect("buffer lengths match the plan");
        let (s0, sk) = ((1.0 / n as f64).sqrt(), (2.0 / n as f64).sqrt());
        for (k, c) in out.iter_mut().enumerate() {
            let vk = if k < spec.len() {
                spec[k]
            } else {
                spec[n - k].conj()
            };
            let scale = if k == 0 { s0 } else { sk };
            *c = scale * (self.dct_twiddles[k] * vk).re;
        }
    }

    /// Inverse of [`Plan::dct`] (orthonormal DCT-III).
    pub(crate) fn idct(&self, coeffs: &[f64], out: &mut [f64]) {
        let n = self.len;
        let (s0, sk) = ((1.0 / n as f64).sqrt(), (2.0 / n as f64).sqrt());
        // Undo the orthonormal scaling to get the plain cosine sums.
        let raw = |k: usize| -> f64 {
            if k == 0 {
                coeffs[0] / s0
            } else if k < n {
                coeffs[k] / sk
            } else {
                0.0
            }
        };
        let mut spec: Vec<Complex64> = (0..half_len(n))
            .map(|k| self.dct_twiddles[k].conj() * Complex64::new(raw(k), -raw(n - k)))
            .collect();
        spec[0].im = 0.0;
        if n.is_multiple_of(2) {
            spec[n / 2].im = 0.0;
        }
        let mut v = vec![0.0; n];
        self.inverse
            .process(&mut spec, &mut v)
            .expect("buffer lengths match the plan");
        let scale = 1.0 / n as f64;
        for (t, y) in out.iter_mut().enumerate() {
            let src = if t % 2 == 0 { t / 2 } else { n - 1 - t / 2 };
            *y = v[src] * scale;
        }
    }
}

/// Half spectra of `n` real series of length `original_len`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumBatch {
    spectra: Vec<Complex64>,
    n: usize,
    original_len: usize,
}

impl SpectrumBatch {
    /// Checks that each spectrum has `half_len(original_len)` bins and that
    /// the DC (and, for even lengths, Nyquist) bins are real.
    pub fn new(spectra: Vec<Vec<Complex64>>, original_len: usize) -> Result<Self> {
        if original_len == 0 {
            return Err(Error::InvalidInput("original length must be at least 1".into()));
        }
        if spectra.is_empty() {
            return Err(Error::InvalidInput("spectrum batch has no series".into()));
        }
        let bins = half_len(original_len);
        let mut flat = Vec::with_capacity(spectra.len() * bins);
        for (i, s) in spectra.iter().enumerate() {
            if s.len() != bins {
                return Err(Error::InvalidInput(format!(
                    "spectrum {i} has {} bins; original length {original_len} needs {bins}",
                    s.len()
                )));
            }
            if s.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidInput(format!("spectrum {i} is not finite")));
            }
            if s[0].im != 0.0 {
                return Err(Error::InvalidInput(format!("spectrum {i}: DC bin is not real")));
            }
            if original_len.is_multiple_of(2) && s[bins - 1].im != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "spectrum {i}: Nyquist bin is not real"
                )));
            }
            flat.extend_from_slice(s);
        }
        Ok(Self {
            n: spectra.len(),
            spectra: flat,
            original_len,
        })
    }

    pub(crate) fn from_parts_unchecked(spectra: Vec<Complex64>, n: usize, original_len: usize) -> Self {
        debug_assert_eq!(spectra.len(), n * half_len(original_len));
        Self {
            spectra,
            n,
            original_len,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn bins(&self) -> usize {
        half_len(self.original_len)
    }

    pub fn spectrum(&self, i: usize) -> &[Complex64] {
        let b = self.bins();
        &self.spectra[i * b..(i + 1) * b]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, Complex64> {
        self.spectra.chunks_exact(self.bins())
    }

    pub(crate) fn as_flat(&self) -> &[Complex64] {
        &self.spectra
    }
}

/// Orthonormal DCT-II coefficients of `n` series.
#[derive(Debug, Clone, PartialEq)]
pub struct DctBatch {
    coeffs: Vec<f64>,
    n: usize,
    original_len: usize,
}

impl DctBatch {
    pub fn new(coeffs: Vec<Vec<f64>>, original_len: usize) -> Result<Self> {
        let batch = Batch::from_rows(&coeffs)?;
        if batch.len() != original_len {
            return Err(Error::InvalidInput(format!(
                "coefficient vectors have length {}, expected {original_len}",
                batch.len()
            )));
        }
        Ok(Self {
            n: batch.n(),
            coeffs: batch.into_flat(),
            original_len,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn coeffs(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.original_len..(i + 1) * self.original_len]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Dct,
    Fft,
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dct" => Ok(Transform::Dct),
            "fft" => Ok(Transform::Fft),
            other => Err(Error::InvalidInput(format!(
                "unknown transform '{other}' (expected dct or fft)"
            ))),
        }
    }
}

pub fn fft_forward(batch: &Batch, parallel: bool) -> SpectrumBatch {
    let len = batch.len();
    let bins = half_len(len);
    let p = plan(len);
    let mut out = vec![Complex64::default(); batch.n() * bins];
    zip_rows::<_, _, (), _>(parallel, batch.as_flat(), len, &mut out, bins, |_, x, y| {
        p.rfft(x, y);
        Ok(())
    })
    .unwrap();
    SpectrumBatch::from_parts_unchecked(out, batch.n(), len)
}

pub fn fft_inverse(spectra: &SpectrumBatch, parallel: bool) -> Result<Batch> {
    let len = spectra.original_len();
    let bins = half_len(len);
    if spectra.as_flat().len() != spectra.n() * bins {
        return Err(Error::InvalidInput(format!(
            "spectrum storage does not match original length {len}"
        )));
    }
    let p = plan(len);
    let mut out = vec![0.0; spectra.n() * len];
    zip_rows::<_, _, (), _>(parallel, spectra.as_flat(), bins, &mut out, len, |_, x, y| {
        p.irfft(x, y);
        Ok(())
    })
    .unwrap();
    Batch::from_flat(out, len)
}

pub fn dct_forward(batch: &Batch, parallel: bool) -> DctBatch {
    let len = batch.len();
    let p = plan(len);
    let mut out = vec![0.0; batch.n() * len];
    zip_rows::<_, _, (), _>(parallel, batch.as_flat(), len, &mut out, len, |_, x, y| {
        p.dct(x, y);
        Ok(())
    })
    .unwrap();
    DctBatch {
        coeffs: out,
        n: batch.n(),
        original_len: len,
    }
}

pub fn dct_inverse(coeffs: &DctBatch, parallel: bool) -> Result<Batch> {
    let len = coeffs.original_len();
    let p = plan(len);
    let mut out = vec![0.0; coeffs.n() * len];
    zip_rows::<_, _, (), _>(parallel, &coeffs.coeffs, len, &mut out, len, |_, x, y| {
        p.idct(x, y);
        Ok(())
    })
    .unwrap();
    Batch::from_flat(out, len)
}

/// Largest absolute difference between `batch` and its reconstruction
/// through `transform` and back.
pub fn roundtrip_check(batch: &Batch, transform: Transform) -> Result<f64> {
    let rebuilt = match transform {
        Transform::Dct => dct_inverse(&dct_forward(batch, true), true)?,
        Transform::Fft => fft_inverse(&fft_forward(batch, true), true)?,
    };
    Ok(batch
        .as_flat()
        .iter()
        .zip(rebuilt.as_flat())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
