//! The augmenter contract shared by every augmentation.
//!
//! Each concrete augmenter implements [`SeriesAugmenter`], which transforms
//! one series given its random stream. [`AugmenterSpec`] pairs an
//! [`Augmenter`] with its application probability and implements the
//! batch-level [`Augment`] contract: one independent task per series, each
//! with its own counter-derived stream.
//!
//! The probability gate takes the first uniform draw of a series' stream.
//! The augmenter fires iff that draw is below the probability, so `p = 0`
//! never fires and `p = 1` always does.

use serde::{Deserialize, Serialize};

use crate::basic::{
    Crop, Drift, Jitter, Noise, Permute, Quantize, Repeat, Resize, Reverse, Rotate, Scale,
};
use crate::batch::Batch;
use crate::error::{Error, Result};
use crate::exec::{rewrite_rows, zip_rows};
use crate::freqaugment::{AmplitudePhase, FrequencyMask};
use crate::freqtransform::{half_len, SpectrumBatch};
use crate::rng::{derive_stream, SeedContext, SeriesRng};
use crate::warp::{TimeWarp, WindowWarp};

/// One series-to-series transformation.
pub trait SeriesAugmenter {
    fn name(&self) -> &'static str;

    /// Parameter checks that do not depend on the series length.
    fn validate(&self) -> Result<()>;

    /// Parameter checks against the length of the incoming series.
    fn check_len(&self, _len: usize) -> Result<()> {
        Ok(())
    }

    /// Output length for an input of length `len`. Never depends on random
    /// draws.
    fn output_len(&self, len: usize) -> usize {
        len
    }

    /// Writes the augmented `input` into `out` (of length
    /// `self.output_len(input.len())`).
    fn apply(&self, input: &[f64], out: &mut [f64], rng: &mut SeriesRng);
}

/// Batch-level augmentation contract, implemented by single augmenters and
/// by whole pipelines.
pub trait Augment: Send + Sync {
    /// Augments one series using the stream of `ctx`.
    fn augment_one(&self, series: &[f64], ctx: SeedContext) -> Result<Vec<f64>>;

    /// Augments every series of `batch`. Series `i` uses the stream of
    /// `SeedContext::new(master_seed, 0, i)`. The result is the same with or
    /// without `parallel`.
    fn augment_batch(&self, batch: &Batch, master_seed: u64, parallel: bool) -> Result<Batch>;
}

/// Every augmenter with its parameters.
///
/// Serialized with a `kind` tag, e.g. `{ kind = "jitter", sigma = 0.1 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Augmenter {
    Jitter(Jitter),
    Scale(Scale),
    Rotate(Rotate),
    Permute(Permute),
    Crop(Crop),
    Reverse(Reverse),
    Resize(Resize),
    Quantize(Quantize),
    Drift(Drift),
    Noise(Noise),
    Repeat(Repeat),
    AmplitudePhase(AmplitudePhase),
    FrequencyMask(FrequencyMask),
    TimeWarp(TimeWarp),
    WindowWarp(WindowWarp),
}

macro_rules! dispatch {
    ($self:expr, $a:ident => $body:expr) => {
        match $self {
            Augmenter::Jitter($a) => $body,
            Augmenter::Scale($a) => $body,
            Augmenter::Rotate($a) => $body,
            Augmenter::Permute($a) => $body,
            Augmenter::Crop($a) => $body,
            Augmenter::Reverse($a) => $body,
            Augmenter::Resize($a) => $body,
            Augmenter::Quantize($a) => $body,
            Augmenter::Drift($a) => $body,
            Augmenter::Noise($a) => $body,
            Augmenter::Repeat($a) => $body,
            Augmenter::AmplitudePhase($a) => $body,
            Augmenter::FrequencyMask($a) => $body,
            Augmenter::TimeWarp($a) => $body,
            Augmenter::WindowWarp($a) => $body,
        }
    };
}

impl SeriesAugmenter for Augmenter {
    fn name(&self) -> &'static str {
        dispatch!(self, a => a.name())
    }

    fn validate(&self) -> Result<()> {
        dispatch!(self, a => a.validate())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        dispatch!(self, a => a.check_len(len))
    }

    fn output_len(&self, len: usize) -> usize {
        dispatch!(self, a => a.output_len(len))
    }

    fn apply(&self, input: &[f64], out: &mut [f64], rng: &mut SeriesRng) {
        dispatch!(self, a => a.apply(input, out, rng))
    }
}

impl Augmenter {
    /// Whether the augmenter may change the series length or the batch size.
    pub fn changes_shape(&self) -> bool {
        matches!(
            self,
            Augmenter::Crop(_) | Augmenter::Resize(_) | Augmenter::Repeat(_)
        )
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, Augmenter::AmplitudePhase(_) | Augmenter::FrequencyMask(_))
    }
}

/// An augmenter plus the probability with which it fires for each series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct AugmenterSpec {
    augmenter: Augmenter,
    probability: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(flatten)]
    augmenter: Augmenter,
    #[serde(default = "one")]
    probability: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawSpec> for AugmenterSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        AugmenterSpec::with_probability(raw.augmenter, raw.probability)
    }
}

impl From<AugmenterSpec> for RawSpec {
    fn from(spec: AugmenterSpec) -> Self {
        RawSpec {
            augmenter: spec.augmenter,
            probability: spec.probability,
        }
    }
}

impl From<Augmenter> for AugmenterSpec {
    /// Always-on spec. Panics if the parameters are invalid; use
    /// [`AugmenterSpec::new`] for untrusted input.
    fn from(augmenter: Augmenter) -> Self {
        AugmenterSpec::new(augmenter).expect("valid augmenter parameters")
    }
}

impl AugmenterSpec {
    /// An augmenter that fires for every series.
    pub fn new(augmenter: Augmenter) -> Result<Self> {
        Self::with_probability(augmenter, 1.0)
    }

    pub fn with_probability(augmenter: Augmenter, probability: f64) -> Result<Self> {
        let name = augmenter.name();
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::param(
                name,
                format!("probability {probability} is outside [0, 1]"),
            ));
        }
        // A gate that fires for only some series would leave the batch with
        // mixed lengths (or, for repeat, an unpredictable size).
        if augmenter.changes_shape() && probability != 0.0 && probability != 1.0 {
            return Err(Error::param(
                name,
                format!("probability must be 0 or 1 for shape-changing augmenters, got {probability}"),
            ));
        }
        augmenter.validate()?;
        Ok(Self {
            augmenter,
            probability,
        })
    }

    pub fn augmenter(&self) -> &Augmenter {
        &self.augmenter
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn name(&self) -> &'static str {
        self.augmenter.name()
    }

    /// Length after this stage for inputs of length `len`.
    pub fn output_len(&self, len: usize) -> usize {
        if self.probability == 0.0 {
            len
        } else {
            self.augmenter.output_len(len)
        }
    }

    /// Checks the parameters against an input length.
    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.probability == 0.0 {
            Ok(())
        } else {
            self.augmenter.check_len(len)
        }
    }

    fn is_repeat(&self) -> bool {
        matches!(self.augmenter, Augmenter::Repeat(_))
    }

    /// Draws the gate for one series, returning the stream positioned after
    /// the gate draw when the augmenter fires.
    fn gate(&self, ctx: SeedContext) -> Option<SeriesRng> {
        let mut rng = derive_stream(ctx);
        (rng.uniform() < self.probability).then_some(rng)
    }

    fn apply_fired(&self, input: &[f64], out: &mut [f64], rng: &mut SeriesRng, series: usize) -> Result<()> {
        self.augmenter.apply(input, out, rng);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteOutput { augmenter: self.name(), series });
        }
        Ok(())
    }

    /// Runs gate plus augmenter for one series into `out`.
    pub(crate) fn apply_series(&self, input: &[f64], out: &mut [f64], ctx: SeedContext) -> Result<()> {
        match self.gate(ctx) {
            Some(mut rng) => self.apply_fired(input, out, &mut rng, ctx.series_index),
            None => {
                out.copy_from_slice(input);
                Ok(())
            }
        }
    }

    /// Augments `batch` as stage `augmenter_index` of a pipeline seeded with
    /// `master_seed`. Series `i` uses `SeedContext::new(master_seed,
    /// augmenter_index, i)`.
    ///
    /// Repeat always runs serially.
    pub fn augment_batch_at(
        &self,
        batch: &Batch,
        master_seed: u64,
        augmenter_index: usize,
        parallel: bool,
    ) -> Result<Batch> {
        let len = batch.len();
        self.check_len(len)?;
        if self.probability == 0.0 {
            return Ok(batch.clone());
        }
        if let Augmenter::Repeat(r) = &self.augmenter {
            return Ok(r.repeat_batch(batch));
        }
        let mut out = Vec::new();
        let out_len = self.augment_rows_into(batch.as_flat(), len, &mut out, master_seed, augmenter_index, parallel)?;
        Ok(Batch::from_parts_unchecked(out, batch.n(), out_len))
    }

    /// Row-wise application into a caller-owned buffer, resized to fit.
    /// Returns the output row length. Lengths must already be checked, and
    /// `Repeat` is not handled here.
    pub(crate) fn augment_rows_into(
        &self,
        input: &[f64],
        len: usize,
        out: &mut Vec<f64>,
        master_seed: u64,
        augmenter_index: usize,
        parallel: bool,
    ) -> Result<usize> {
        let out_len = self.output_len(len);
        out.resize(input.len() / len * out_len, 0.0);
        zip_rows(parallel, input, len, out, out_len, |i, x, y| {
            self.apply_series(x, y, SeedContext::new(master_seed, augmenter_index, i))
        })?;
        Ok(out_len)
    }

    /// Length-preserving application over a buffer the caller owns,
    /// overwriting it row by row.
    pub(crate) fn augment_rows_in_place(
        &self,
        data: &mut [f64],
        len: usize,
        master_seed: u64,
        augmenter_index: usize,
        parallel: bool,
    ) -> Result<()> {
        debug_assert_eq!(self.output_len(len), len);
        rewrite_rows(parallel, data, len, |i, scratch, row| {
            // rows the gate skips are already correct
            match self.gate(SeedContext::new(master_seed, augmenter_index, i)) {
                Some(mut rng) => {
                    scratch.clear();
                    scratch.extend_from_slice(row);
                    self.apply_fired(scratch, row, &mut rng, i)
                }
                None => Ok(()),
            }
        })
    }

    /// Applies a spectral augmenter directly to precomputed half spectra.
    /// Draws match the time-domain path for the same stream, so the two
    /// routes agree bin for bin.
    pub fn augment_spectra_at(
        &self,
        spectra: &SpectrumBatch,
        master_seed: u64,
        augmenter_index: usize,
        parallel: bool,
    ) -> Result<SpectrumBatch> {
        let len = spectra.original_len();
        if !self.augmenter.is_spectral() {
            return Err(Error::param(self.name(), "not a frequency-domain augmenter"));
        }
        self.check_len(len)?;
        let bins = half_len(len);
        let mut out = spectra.as_flat().to_vec();
        let p = self.probability;
        zip_rows::<_, _, Error, _>(parallel, spectra.as_flat(), bins, &mut out, bins, |i, _, y| {
            let mut rng = derive_stream(SeedContext::new(master_seed, augmenter_index, i));
            if rng.uniform() < p {
                match &self.augmenter {
                    Augmenter::AmplitudePhase(a) => a.perturb_spectrum(y, len, &mut rng),
                    Augmenter::FrequencyMask(m) => m.mask_spectrum(y, &mut rng),
                    _ => unreachable!(),
                }
            }
            if y.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::NonFiniteOutput {
                    augmenter: self.name(),
                    series: i,
                });
            }
            Ok(())
        })?;
        Ok(SpectrumBatch::from_parts_unchecked(out, spectra.n(), len))
    }
}

impl Augment for AugmenterSpec {
    /// Repeat is a batch-level operation; on a single series it returns the
    /// series unchanged.
    fn augment_one(&self, series: &[f64], ctx: SeedContext) -> Result<Vec<f64>> {
        if series.is_empty() {
            return Err(Error::InvalidInput("empty series".into()));
        }
        if series.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("series contains non-finite values".into()));
        }
        self.check_len(series.len())?;
        if self.is_repeat() {
            return Ok(series.to_vec());
        }
        let mut out = vec![0.0; self.output_len(series.len())];
        self.apply_series(series, &mut out, ctx)?;
        Ok(out)
    }

    fn augment_batch(&self, batch: &Batch, master_seed: u64, parallel: bool) -> Result<Batch> {
        self.augment_batch_at(batch, master_seed, 0, parallel)
    }
}
