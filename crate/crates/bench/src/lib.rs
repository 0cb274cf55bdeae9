//! Timing and peak-memory harness.
//!
//! Every measurement runs one warm-up pass and then `repeats` timed passes,
//! keeping the median and minimum. Peak memory is sampled from the process
//! resident-set size on a watcher thread, so benchmarks should not run
//! concurrently with anything else in the same process.

mod memory;

use std::hint::black_box;
use std::time::Instant;

use chronaug::{run, AugmenterSpec, Batch, Mode, PipelineConfig};
use serde::Serialize;

pub use memory::{measure_peak_memory, rss_bytes};

/// Minimum number of timed repeats accepted for a full report.
pub const MIN_REPORT_REPEATS: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] chronaug::Error),
    #[error("repeats must be at least {min}, got {got}")]
    Repeats { min: usize, got: usize },
    #[error("resident-set size is not available on this platform")]
    UnsupportedPlatform,
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

/// Wall-clock samples for one measured operation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub name: String,
    pub samples_ms: Vec<f64>,
    pub median_ms: f64,
    pub min_ms: f64,
    /// Sum of the last output, kept so the work cannot be optimised away.
    pub checksum: f64,
}

impl Timing {
    fn from_samples(name: String, samples_ms: Vec<f64>, checksum: f64) -> Self {
        let mut sorted = samples_ms.clone();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median_ms = if sorted.len().is_multiple_of(2) {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        } else {
            sorted[mid]
        };
        Timing { name, min_ms: sorted[0], median_ms, samples_ms, checksum }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub dataset_name: String,
    pub n_series: usize,
    pub series_len: usize,
    pub mode: String,
    pub parallel: bool,
    pub stages: Vec<Timing>,
    pub pipeline: Timing,
    /// `None` when the platform exposes no resident-set size.
    pub peak_rss_mb: Option<f64>,
    pub repeats: usize,
    pub environment: String,
}

fn time_repeats<F>(name: String, repeats: usize, mut work: F) -> Result<Timing>
where
    F: FnMut() -> Result<Batch>,
{
    if repeats == 0 {
        return Err(BenchError::Repeats { min: 1, got: 0 });
    }
    let warm = work()?;
    let mut checksum = black_box(warm.as_flat().iter().sum::<f64>());
    drop(warm);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let out = black_box(work()?);
        samples.push(start.elapsed().as_secs_f64() * 1e3);
        checksum = out.as_flat().iter().sum::<f64>();
    }
    Ok(Timing::from_samples(name, samples, checksum))
}

/// Times `spec.augment_batch` on `batch`.
pub fn bench_augmenter(
    spec: &AugmenterSpec,
    batch: &Batch,
    master_seed: u64,
    parallel: bool,
    repeats: usize,
) -> Result<Timing> {
    bench_stage(spec, batch, master_seed, 0, parallel, repeats)
}

fn bench_stage(
    spec: &AugmenterSpec,
    batch: &Batch,
    master_seed: u64,
    index: usize,
    parallel: bool,
    repeats: usize,
) -> Result<Timing> {
    time_repeats(spec.name().to_string(), repeats, || {
        Ok(spec.augment_batch_at(batch, master_seed, index, parallel)?)
    })
}

/// Times a full pipeline run.
pub fn bench_pipeline(config: &PipelineConfig, batch: &Batch, repeats: usize) -> Result<Timing> {
    time_repeats("pipeline".to_string(), repeats, || Ok(run(config, batch)?))
}

/// Benchmarks every stage of `config` and then the whole pipeline.
///
/// Stage `j` is timed on the output of stages `0..j`, so shape-changing
/// stages see the same input they would inside the pipeline. Memory is
/// measured over one extra pipeline run when `measure_memory` is set; on
/// platforms without RSS introspection the report falls back to timings only.
pub fn run_report(
    dataset_name: &str,
    config: &PipelineConfig,
    batch: &Batch,
    repeats: usize,
    measure_memory: bool,
) -> Result<BenchReport> {
    if repeats < MIN_REPORT_REPEATS {
        return Err(BenchError::Repeats { min: MIN_REPORT_REPEATS, got: repeats });
    }
    config.validate_for_len(batch.len())?;

    let mut stages = Vec::with_capacity(config.stages.len());
    let mut current = batch.clone();
    for (j, spec) in config.stages.iter().enumerate() {
        stages.push(bench_stage(spec, &current, config.master_seed, j, config.parallel, repeats)?);
        current = spec.augment_batch_at(&current, config.master_seed, j, config.parallel)?;
    }
    drop(current);

    let pipeline = bench_pipeline(config, batch, repeats)?;
    let peak_rss_mb = if measure_memory {
        match measure_peak_memory(|| run(config, batch)) {
            Ok((out, peak)) => {
                out?;
                Some(peak)
            }
            Err(BenchError::UnsupportedPlatform) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(BenchReport {
        dataset_name: dataset_name.to_string(),
        n_series: batch.n(),
        series_len: batch.len(),
        mode: match config.mode {
            Mode::Standard => "standard",
            Mode::PerSample => "per-sample",
        }
        .to_string(),
        parallel: config.parallel,
        stages,
        pipeline,
        peak_rss_mb,
        repeats,
        environment: environment_note(),
    })
}

/// Operating system, architecture and thread counts of the running process.
pub fn environment_note() -> String {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!(
        "{}-{}; {} hardware threads; {} worker threads; chronaug {}",
        std::env::consts::OS,
        std::env::consts::ARCH,
        hw,
        rayon::current_num_threads(),
        chronaug::VERSION,
    )
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per stage plus a final `pipeline` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,median_ms,min_ms,n_series,series_len,repeats\n");
        for t in self.stages.iter().chain(std::iter::once(&self.pipeline)) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                t.name, t.median_ms, t.min_ms, self.n_series, self.series_len, self.repeats
            ));
        }
        out
    }
}

/// Least-squares slope of `ln(time)` against `ln(size)`.
pub fn power_law_exponent(sizes: &[f64], times: &[f64]) -> f64 {
    assert_eq!(sizes.len(), times.len());
    let xs: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
