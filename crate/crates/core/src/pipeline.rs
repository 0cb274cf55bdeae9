//! Ordered augmenter chains.
//!
//! Stage `j` draws from the streams `SeedContext::new(master_seed, j, i)`,
//! so the standard mode (stage by stage over the whole batch) and the
//! per-sample mode (whole chain on one series at a time) produce identical
//! results, and neither depends on the parallel flag.
//!
//! Configs are stored as TOML:
//!
//! ```toml
//! master_seed = 42
//! parallel = true
//! mode = "standard"      # or "per_sample"
//!
//! [[stages]]
//! kind = "jitter"
//! sigma = 0.1
//! probability = 0.5      # optional, defaults to 1
//!
//! [[stages]]
//! kind = "noise"
//! noise = { type = "spike", count = 3, magnitude = 2.0 }
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::augment::{Augmenter, AugmenterSpec};
use crate::basic::{Drift, Jitter, Quantize, Reverse, Scale};
use crate::batch::Batch;
use crate::error::{Error, Result};
use crate::exec::zip_rows;
use crate::freqaugment::FrequencyMask;
use crate::rng::SeedContext;
use crate::warp::TimeWarp;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Each stage runs over the whole batch before the next stage starts.
    #[default]
    Standard,
    /// Each series runs through the whole chain independently.
    PerSample,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "per-sample" | "per_sample" => Ok(Mode::PerSample),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode '{other}' (expected standard or per-sample)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default, with = "seed_repr")]
    pub master_seed: u64,
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub stages: Vec<AugmenterSpec>,
}

/// TOML integers are signed; seeds above `i64::MAX` are written as strings.
mod seed_repr {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => Repr::Int(v),
            Err(_) => Repr::Text(seed.to_string()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => u64::try_from(v)
                .map_err(|_| serde::de::Error::custom(format!("master_seed {v} is negative"))),
            Repr::Text(t) => t
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("master_seed '{t}' is not a u64"))),
        }
    }
}

impl PipelineConfig {
    pub fn new(stages: Vec<AugmenterSpec>, master_seed: u64) -> Self {
        Self {
            master_seed,
            stages,
            ..Self::default()
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// A seven-stage, length-preserving chain mixing basic, spectral and
    /// warping augmenters. Used for benchmarks.
    pub fn reference_chain(master_seed: u64) -> Self {
        let stage = |a: Augmenter, p: f64| AugmenterSpec::with_probability(a, p).unwrap();
        Self::new(
            vec![
                stage(Augmenter::Jitter(Jitter { sigma: 0.05 }), 1.0),
                stage(Augmenter::Scale(Scale { sigma: 0.1 }), 0.5),
                stage(Augmenter::Drift(Drift { max_drift: 0.5, n_points: 5 }), 0.8),
                stage(Augmenter::TimeWarp(TimeWarp::default()), 0.5),
                stage(Augmenter::FrequencyMask(FrequencyMask { width: 3 }), 0.5),
                stage(Augmenter::Quantize(Quantize { n_levels: 32 }), 0.5),
                stage(Augmenter::Reverse(Reverse), 0.5),
            ],
            master_seed,
        )
    }

    /// Checks the chain independently of any batch.
    pub fn validate(&self) -> Result<()> {
        let repeats: Vec<usize> = self
            .stages
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s.augmenter(), Augmenter::Repeat(_)))
            .map(|(j, _)| j)
            .collect();
        if repeats.len() > 1 {
            return Err(Error::InvalidConfig(format!(
                "repeat may appear at most once, found it at stages {repeats:?}"
            )));
        }
        if self.mode == Mode::PerSample && !repeats.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "stage {} (repeat) grows the batch and is not allowed in per-sample mode",
                repeats[0]
            )));
        }
        Ok(())
    }

    /// Checks every stage against the length it will receive and returns
    /// the final series length.
    pub fn validate_for_len(&self, len: usize) -> Result<usize> {
        self.validate()?;
        self.stages.iter().enumerate().try_fold(len, |len, (j, stage)| {
            stage
                .check_len(len)
                .map_err(|e| Error::InvalidConfig(format!("stage {j} ({}): {e}", stage.name())))?;
            Ok(stage.output_len(len))
        })
    }

    /// TOML form of the config; [`PipelineConfig::parse`] reads it back.
    pub fn describe(&self) -> String {
        toml::to_string(self).expect("pipeline configs always serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} stage(s), mode={:?}, parallel={}, seed={}",
            self.stages.len(),
            self.mode,
            self.parallel,
            self.master_seed
        )?;
        for (j, s) in self.stages.iter().enumerate() {
            write!(f, "\n  [{j}] {} p={}", s.name(), s.probability())?;
        }
        Ok(())
    }
}

/// Runs the chain over `batch`.
pub fn run(config: &PipelineConfig, batch: &Batch) -> Result<Batch> {
    let final_len = config.validate_for_len(batch.len())?;
    match config.mode {
        Mode::Standard => run_standard(config, batch),
        Mode::PerSample => run_per_sample(config, batch, final_len),
    }
}

fn run_standard(config: &PipelineConfig, batch: &Batch) -> Result<Batch> {
    // The first stage that fires copies the batch into an owned buffer;
    // length-preserving stages after it rewrite that buffer in place and
    // only length-changing stages allocate.
    let mut current: Option<Vec<f64>> = None;
    let mut len = batch.len();
    for (j, stage) in config.stages.iter().enumerate() {
        if stage.probability() == 0.0 {
            continue;
        }
        stage.check_len(len)?;
        let seed = config.master_seed;
        current = Some(match (current.take(), stage.augmenter()) {
            (data, Augmenter::Repeat(r)) => r.repeat_rows(data.as_deref().unwrap_or(batch.as_flat()), len),
            (Some(mut data), _) if stage.output_len(len) == len => {
                stage.augment_rows_in_place(&mut data, len, seed, j, config.parallel)?;
                data
            }
            (data, _) => {
                let mut out = Vec::new();
                let input = data.as_deref().unwrap_or(batch.as_flat());
                len = stage.augment_rows_into(input, len, &mut out, seed, j, config.parallel)?;
                out
            }
        });
    }
    Ok(match current {
        Some(data) => {
            let n = data.len() / len;
            Batch::from_parts_unchecked(data, n, len)
        }
        None => batch.clone(),
    })
}

fn run_per_sample(config: &PipelineConfig, batch: &Batch, final_len: usize) -> Result<Batch> {
    let mut out = vec![0.0; batch.n() * final_len];
    zip_rows(config.parallel, batch.as_flat(), batch.len(), &mut out, final_len, |i, x, y| {
        let mut current = x.to_vec();
        let mut next = Vec::with_capacity(x.len());
        for (j, stage) in config.stages.iter().enumerate() {
            next.resize(stage.output_len(current.len()), 0.0);
            stage.apply_series(&current, &mut next, SeedContext::new(config.master_seed, j, i))?;
            std::mem::swap(&mut current, &mut next);
        }
        y.copy_from_slice(&current);
        Ok::<(), Error>(())
    })?;
    Ok(Batch::from_parts_unchecked(out, batch.n(), final_len))
}
