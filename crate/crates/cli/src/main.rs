//! `chronaug` command-line tool.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 I/O failure.
//! Set `CHRONAUG_NUM_THREADS` to cap the worker pool; unset means one worker
//! per hardware thread.

mod dataset;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use chronaug::synthetic::gaussian_walks;
use chronaug::{assess_quality, roundtrip_check, run, Mode, PipelineConfig, Transform};
use chronaug_bench::{run_report, BenchError};
use dataset::Format;

const THREADS_VAR: &str = "CHRONAUG_NUM_THREADS";
const ROUNDTRIP_TOLERANCE: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<chronaug::Error> for CliError {
    fn from(e: chronaug::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "chronaug", version, about = "Time-series augmentation, benchmarking and quality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an augmentation pipeline over a dataset file.
    Augment {
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Input format; detected from an `@` header when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Time every stage and the whole pipeline; report peak memory.
    Bench {
        /// Dataset file to benchmark on.
        #[arg(required_unless_present = "synthetic", conflicts_with = "synthetic")]
        input: Option<PathBuf>,
        /// Use N seeded Gaussian random walks of length L instead of a file.
        #[arg(long, num_args = 2, value_names = ["N", "L"])]
        synthetic: Option<Vec<usize>>,
        /// Pipeline config; the built-in 7-stage reference chain when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write a CSV with one row per stage plus the pipeline total.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Forward and inverse transform; exit 0 iff the max error is <= 1e-8.
    Roundtrip {
        input: PathBuf,
        #[arg(long, default_value = "fft")]
        transform: Transform,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Pairwise DTW distance and similarity between two datasets.
    Quality {
        original: PathBuf,
        augmented: PathBuf,
        /// Write the CSV here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Process series in parallel (overrides the config).
    #[arg(long)]
    parallel: bool,
    /// Override the config's execution mode.
    #[arg(long)]
    mode: Option<Mode>,
}

impl RunArgs {
    fn apply(&self, mut config: PipelineConfig) -> PipelineConfig {
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if self.parallel {
            config.parallel = true;
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        config
    }
}

fn load_config(path: &Path) -> Result<PipelineConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    PipelineConfig::parse(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("standard output: {e}"))),
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn augment(input: &Path, config: &Path, output: &Path, args: &RunArgs, format: Option<Format>) -> Result<(), CliError> {
    let data = dataset::read(input, format)?;
    let config = args.apply(load_config(config)?);
    let start = Instant::now();
    let out = run(&config, &data.batch)?;
    let elapsed = start.elapsed();
    data.with_batch(out).write(output)?;
    let names: Vec<&str> = config.stages.iter().map(|s| s.name()).collect();
    eprintln!(
        "applied [{}] to {} series of length {} in {:.3} ms",
        names.join(", "),
        data.batch.n(),
        data.batch.len(),
        elapsed.as_secs_f64() * 1e3
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    input: Option<&Path>,
    synthetic: Option<&[usize]>,
    config: Option<&Path>,
    repeats: usize,
    report_path: Option<&Path>,
    csv: Option<&Path>,
    args: &RunArgs,
    format: Option<Format>,
) -> Result<(), CliError> {
    let config = match config {
        Some(p) => load_config(p)?,
        None => PipelineConfig::reference_chain(0),
    };
    let config = args.apply(config);
    let (name, batch) = match (input, synthetic) {
        (Some(p), _) => (p.display().to_string(), dataset::read(p, format)?.batch),
        (None, Some(&[n, len])) => {
            if n == 0 || len == 0 {
                return Err(CliError::Invalid("--synthetic needs N >= 1 and L >= 1".into()));
            }
            (format!("synthetic-walks-{n}x{len}"), gaussian_walks(n, len, config.master_seed))
        }
        _ => return Err(CliError::Invalid("give a dataset file or --synthetic N L".into())),
    };
    let report = match run_report(&name, &config, &batch, repeats, true) {
        Ok(r) => r,
        Err(BenchError::Core(e)) => return Err(e.into()),
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    if report.peak_rss_mb.is_none() {
        eprintln!("peak memory unavailable on this platform; report holds timings only");
    }
    eprintln!(
        "{} stages over {} x {}: pipeline median {:.3} ms",
        report.stages.len(),
        report.n_series,
        report.series_len,
        report.pipeline.median_ms
    );
    write_output(report_path, &report.to_json())?;
    if let Some(p) = csv {
        write_output(Some(p), &report.to_csv())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = init_threads().and_then(|()| dispatch(cli.command));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Augment { input, config, output, run, format } => {
            augment(&input, &config, &output, &run, format)?;
        }
        Command::Bench { input, synthetic, config, repeats, report, csv, run, format } => {
            bench(
                input.as_deref(),
                synthetic.as_deref(),
                config.as_deref(),
                repeats,
                report.as_deref(),
                csv.as_deref(),
                &run,
                format,
            )?;
        }
        Command::Roundtrip { input, transform, format } => {
            let data = dataset::read(&input, format)?;
            let err = roundtrip_check(&data.batch, transform)?;
            println!("{err:e}");
            if err > ROUNDTRIP_TOLERANCE {
                eprintln!("max error {err:e} exceeds {ROUNDTRIP_TOLERANCE:e}");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Quality { original, augmented, output, parallel, format } => {
            let a = dataset::read(&original, format)?;
            let b = dataset::read(&augmented, format)?;
            let q = assess_quality(&a.batch, &b.batch, parallel)?;
            let mut csv = String::from("series,distance,similarity\n");
            for (i, p) in q.pairs.iter().enumerate() {
                csv.push_str(&format!("{i},{:?},{:?}\n", p.distance, p.similarity));
            }
            csv.push_str(&format!("mean,{:?},{:?}\n", q.mean_distance, q.mean_similarity));
            write_output(output.as_deref(), &csv)?;
            eprintln!("mean similarity {:.4} over {} pairs", q.mean_similarity, q.pairs.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}
