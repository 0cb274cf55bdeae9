//! Fast augmentation of univariate, equal-length time series.
//!
//! Fifteen augmenters in three families:
//!
//! * time domain ([`basic`]): jitter, scale, rotate, permute, crop, reverse,
//!   resize, quantize, drift, noise (uniform, Gaussian, spike, slope trend)
//!   and repeat;
//! * frequency domain ([`freqaugment`]): amplitude-phase perturbation and
//!   frequency masking;
//! * time warping ([`warp`]): whole-series and windowed.
//!
//! plus DCT/FFT transforms with a reconstruction check ([`freqtransform`]),
//! DTW similarity ([`dtw`]) and probabilistic pipelines ([`pipeline`]).
//!
//! Every augmenter draws from a counter-based stream derived from
//! `(master_seed, stage, series)` ([`rng`]), so results are identical
//! whether a batch is processed serially or in parallel.
//!
//! ```
//! use chronaug::{run, Augmenter, AugmenterSpec, Batch, PipelineConfig};
//! use chronaug::basic::{Jitter, Reverse};
//!
//! let batch = Batch::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
//! let config = PipelineConfig::new(
//!     vec![
//!         AugmenterSpec::new(Augmenter::Jitter(Jitter { sigma: 0.1 })).unwrap(),
//!         AugmenterSpec::with_probability(Augmenter::Reverse(Reverse), 0.5).unwrap(),
//!     ],
//!     42,
//! );
//! let out = run(&config, &batch).unwrap();
//! assert_eq!(out.n(), 2);
//! ```

pub mod augment;
pub mod basic;
pub mod batch;
pub mod dtw;
mod error;
mod exec;
pub mod freqaugment;
pub mod freqtransform;
pub mod pipeline;
pub mod rng;
pub mod synthetic;
pub mod warp;

pub use augment::{Augment, Augmenter, AugmenterSpec, SeriesAugmenter};
pub use basic::NoiseKind;
pub use batch::Batch;
pub use dtw::{assess_quality, dtw_cost, dtw_distance, dtw_similarity, DtwResult, QualityReport};
pub use error::{Error, Result};
pub use freqtransform::{
    dct_forward, dct_inverse, fft_forward, fft_inverse, roundtrip_check, Complex64, DctBatch,
    SpectrumBatch, Transform,
};
pub use pipeline::{run, Mode, PipelineConfig};
pub use rng::{derive_stream, SeedContext, SeriesRng};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
