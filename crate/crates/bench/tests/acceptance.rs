//! Acceptance suite. Runs every criterion in sequence (the timing and memory
//! criteria must not share the process with other work), prints one line per
//! criterion and exits non-zero if any fails.
//!
//! Run with `cargo test -p chronaug-bench --test acceptance`.

use std::time::{Duration, Instant};

use chronaug::basic::*;
use chronaug::freqaugment::{AmplitudePhase, FrequencyMask};
use chronaug::synthetic::{bump_profiles, gaussian_walks};
use chronaug::warp::{TimeWarp, WindowWarp};
use chronaug::{
    assess_quality, dct_forward, dct_inverse, dtw_cost, dtw_distance, fft_forward, fft_inverse, run,
    Augment, Augmenter, AugmenterSpec, Batch, Complex64, Mode, PipelineConfig, SeriesAugmenter,
};
use chronaug_bench::{bench_pipeline, measure_peak_memory, power_law_exponent, BenchError};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, elapsed: Duration, outcome: Outcome) -> Outcome {
    let outcome = outcome?;
    check(
        elapsed <= limit,
        format!("{outcome}; {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    fn unit(&mut self) -> f64 {
        self.next() as f64 / (1u64 << 53) as f64
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

fn naive_dft(x: &[f64]) -> Vec<Complex64> {
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

fn exhaustive_dtw(a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
    let here = (a[i] - b[j]).abs();
    if i + 1 == a.len() && j + 1 == b.len() {
        return here;
    }
    let mut best = f64::INFINITY;
    if i + 1 < a.len() {
        best = best.min(exhaustive_dtw(a, b, i + 1, j));
    }
    if j + 1 < b.len() {
        best = best.min(exhaustive_dtw(a, b, i, j + 1));
    }
    if i + 1 < a.len() && j + 1 < b.len() {
        best = best.min(exhaustive_dtw(a, b, i + 1, j + 1));
    }
    here + best
}

fn max_abs_diff(a: &Batch, b: &Batch) -> f64 {
    a.as_flat().iter().zip(b.as_flat()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn every_augmenter() -> Vec<Augmenter> {
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

fn transform_round_trip() -> Outcome {
    let start = Instant::now();
    let lens = [16, 97, 100, 571];
    let (mut worst_fft, mut worst_dct) = (0.0f64, 0.0f64);
    for k in 0..20u64 {
        let batch = gaussian_walks(100, lens[k as usize % 4], 1000 + k);
        let fft = fft_inverse(&fft_forward(&batch, true), true).map_err(|e| e.to_string())?;
        let dct = dct_inverse(&dct_forward(&batch, true), true).map_err(|e| e.to_string())?;
        worst_fft = worst_fft.max(max_abs_diff(&batch, &fft));
        worst_dct = worst_dct.max(max_abs_diff(&batch, &dct));
    }
    within(
        Duration::from_secs(10),
        start.elapsed(),
        check(
            worst_fft <= 1e-8 && worst_dct <= 1e-8,
            format!("max error fft {worst_fft:.2e}, dct {worst_dct:.2e} (tol 1e-8)"),
        ),
    )
}

fn fft_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = Lcg(7);
    let mut worst = 0.0f64;
    for len in 1..=64 {
        let x: Vec<f64> = (0..len).map(|_| 20.0 * rng.unit() - 10.0).collect();
        let batch = Batch::from_rows(std::slice::from_ref(&x)).map_err(|e| e.to_string())?;
        let ours = fft_forward(&batch, false);
        let oracle = naive_dft(&x);
        for (a, b) in ours.spectrum(0).iter().zip(&oracle) {
            worst = worst.max((a.re - b.re).abs()).max((a.im - b.im).abs());
        }
    }
    within(
        Duration::from_secs(5),
        start.elapsed(),
        check(worst <= 1e-9, format!("max deviation from naive DFT {worst:.2e} over L=1..=64 (tol 1e-9)")),
    )
}

fn dtw_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = Lcg(11);
    let mut mismatches = 0;
    for _ in 0..500 {
        let (la, lb) = (rng.int(1, 6) as usize, rng.int(1, 6) as usize);
        let a: Vec<f64> = (0..la).map(|_| rng.int(-3, 3) as f64).collect();
        let b: Vec<f64> = (0..lb).map(|_| rng.int(-3, 3) as f64).collect();
        let oracle = exhaustive_dtw(&a, &b, 0, 0);
        let full = dtw_distance(&a, &b).map_err(|e| e.to_string())?.distance;
        let cost = dtw_cost(&a, &b).map_err(|e| e.to_string())?;
        if full != oracle || cost != oracle {
            mismatches += 1;
        }
    }
    within(
        Duration::from_secs(30),
        start.elapsed(),
        check(mismatches == 0, format!("{mismatches}/500 pairs differ from exhaustive search")),
    )
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().map_err(|e| e.to_string())?;
    let batch = gaussian_walks(200, 64, 21);
    let mut failures = Vec::new();
    for a in every_augmenter() {
        let spec = AugmenterSpec::new(a).map_err(|e| e.to_string())?;
        let serial = spec.augment_batch(&batch, 42, false).map_err(|e| e.to_string())?;
        let parallel = pool.install(|| spec.augment_batch(&batch, 42, true)).map_err(|e| e.to_string())?;
        if serial != parallel {
            failures.push(spec.name().to_string());
        }
    }
    let chain = PipelineConfig::reference_chain(42);
    let serial = run(&chain, &batch).map_err(|e| e.to_string())?;
    let parallel = pool.install(|| run(&chain.clone().with_parallel(true), &batch)).map_err(|e| e.to_string())?;
    if serial != parallel {
        failures.push("pipeline".into());
    }
    for mode_parallel in [false, true] {
        let per_sample = pool
            .install(|| run(&chain.clone().with_mode(Mode::PerSample).with_parallel(mode_parallel), &batch))
            .map_err(|e| e.to_string())?;
        if per_sample != serial {
            failures.push(format!("per-sample (parallel={mode_parallel})"));
        }
    }
    within(
        Duration::from_secs(20),
        start.elapsed(),
        check(
            failures.is_empty(),
            format!("{} augmenters + 7-stage pipeline, both modes; mismatches: {failures:?}", every_augmenter().len()),
        ),
    )
}

fn identity() -> Outcome {
    let batch = gaussian_walks(50, 64, 31);
    let len = batch.len();
    let exact = vec![
        Augmenter::Jitter(Jitter { sigma: 0.0 }),
        Augmenter::Scale(Scale { sigma: 0.0 }),
        Augmenter::Permute(Permute { n_segments: 1 }),
        Augmenter::Crop(Crop { size: len }),
        Augmenter::Resize(Resize { target_len: len }),
        Augmenter::Drift(Drift { max_drift: 0.0, n_points: 5 }),
        Augmenter::Noise(Noise { noise: NoiseKind::Uniform { half_width: 0.0 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::Gaussian { sigma: 0.0 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::Spike { count: 0, magnitude: 1.0 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::Spike { count: 3, magnitude: 0.0 } }),
        Augmenter::Noise(Noise { noise: NoiseKind::SlopeTrend { max_slope: 0.0 } }),
        Augmenter::Repeat(Repeat { times: 1 }),
        Augmenter::TimeWarp(TimeWarp { n_knots: 4, intensity: 0.0 }),
        Augmenter::WindowWarp(WindowWarp { n_knots: 4, intensity: 0.0, window_size: 16 }),
    ];
    let spectral = vec![
        Augmenter::AmplitudePhase(AmplitudePhase { sigma_amp: 0.0, sigma_phase: 0.0 }),
        Augmenter::FrequencyMask(FrequencyMask { width: 0 }),
    ];
    let mut failures = Vec::new();
    let mut cases = 0;
    for a in exact {
        cases += 1;
        let out = AugmenterSpec::new(a.clone()).and_then(|s| s.augment_batch(&batch, 5, true));
        if out.as_ref().ok() != Some(&batch) {
            failures.push(a.name().to_string());
        }
    }
    for a in spectral {
        cases += 1;
        let out = AugmenterSpec::new(a.clone()).and_then(|s| s.augment_batch(&batch, 5, true));
        match out {
            Ok(out) if out.len() == len && max_abs_diff(&out, &batch) <= 1e-8 => {}
            _ => failures.push(a.name().to_string()),
        }
    }
    for a in every_augmenter() {
        cases += 1;
        let out = AugmenterSpec::with_probability(a.clone(), 0.0).and_then(|s| s.augment_batch(&batch, 5, true));
        if out.as_ref().ok() != Some(&batch) {
            failures.push(format!("{} p=0", a.name()));
        }
    }
    cases += 1;
    if run(&PipelineConfig::new(vec![], 5), &batch).as_ref().ok() != Some(&batch) {
        failures.push("empty pipeline".into());
    }
    check(failures.is_empty(), format!("{cases} identity cases; failures: {failures:?}"))
}

fn gate_statistics() -> Outcome {
    let m = 10_000usize;
    let batch = gaussian_walks(m, 16, 41);
    let spec = AugmenterSpec::with_probability(Augmenter::Jitter(Jitter { sigma: 1.0 }), 0.5)
        .map_err(|e| e.to_string())?;
    let out = spec.augment_batch(&batch, 2024, true).map_err(|e| e.to_string())?;
    let fired = (0..m).filter(|&i| out.series(i) != batch.series(i)).count();
    let dev = (fired as f64 - m as f64 * 0.5).abs();
    let sigma = (m as f64 * 0.25).sqrt();
    check(dev <= 3.0 * sigma, format!("{fired}/{m} modified, |dev| {dev:.0} vs 3 sigma {:.0}", 3.0 * sigma))
}

fn scaling() -> Outcome {
    let start = Instant::now();
    let sizes = [1_000usize, 10_000, 100_000];
    let cfg = PipelineConfig::reference_chain(7).with_parallel(true);
    let mut times = Vec::new();
    for &n in &sizes {
        let batch = gaussian_walks(n, 500, 51);
        times.push(bench_pipeline(&cfg, &batch, 3).map_err(|e| e.to_string())?.median_ms);
    }
    let sizes_f: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let exponent = power_law_exponent(&sizes_f, &times);
    within(
        Duration::from_secs(180),
        start.elapsed(),
        check(
            exponent <= 1.3,
            format!("median ms {times:.1?} for N={sizes:?}, exponent {exponent:.3} (max 1.3)"),
        ),
    )
}

fn mode_overhead() -> Outcome {
    let batch = gaussian_walks(10_000, 500, 61);
    let standard_cfg = PipelineConfig::reference_chain(9).with_parallel(true);
    let per_sample_cfg = standard_cfg.clone().with_mode(Mode::PerSample);
    // alternate the two modes so drifting machine load hits both equally
    let (mut standard, mut per_sample) = (Vec::new(), Vec::new());
    for _ in 0..7 {
        standard.push(bench_pipeline(&standard_cfg, &batch, 1).map_err(|e| e.to_string())?.min_ms);
        per_sample.push(bench_pipeline(&per_sample_cfg, &batch, 1).map_err(|e| e.to_string())?.min_ms);
    }
    let median = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let (standard, per_sample) = (median(&mut standard), median(&mut per_sample));
    let ratio = per_sample.max(standard) / per_sample.min(standard);
    check(
        ratio <= 1.15,
        format!("standard {standard:.1} ms, per-sample {per_sample:.1} ms, ratio {ratio:.3} (max 1.15)"),
    )
}

fn memory() -> Outcome {
    let cfg = PipelineConfig::reference_chain(13).with_parallel(true);
    let mut peaks = Vec::new();
    for n in [10_000usize, 50_000, 100_000] {
        let batch = gaussian_walks(n, 500, 71);
        match measure_peak_memory(|| run(&cfg, &batch)) {
            Ok((out, peak)) => {
                out.map_err(|e| e.to_string())?;
                peaks.push(peak);
            }
            Err(BenchError::UnsupportedPlatform) => return Err("no RSS introspection on this platform".into()),
            Err(e) => return Err(e.to_string()),
        }
    }
    let monotone = peaks.windows(2).all(|w| w[1] >= 0.8 * w[0]);
    check(
        monotone && peaks[2] > peaks[0],
        format!("peak MB above baseline {peaks:.1?} for N=[10000, 50000, 100000]"),
    )
}

fn quality_ordering() -> Outcome {
    let batch = bump_profiles(200, 128, 7);
    let mean_similarity = |a: Augmenter| -> Result<f64, String> {
        let spec = AugmenterSpec::new(a).map_err(|e| e.to_string())?;
        let out = spec.augment_batch(&batch, 42, true).map_err(|e| e.to_string())?;
        Ok(assess_quality(&batch, &out, true).map_err(|e| e.to_string())?.mean_similarity)
    };
    let ww = mean_similarity(Augmenter::WindowWarp(WindowWarp { n_knots: 4, intensity: 0.5, window_size: 13 }))?;
    let rev = mean_similarity(Augmenter::Reverse(Reverse))?;
    let drift = mean_similarity(Augmenter::Drift(Drift { max_drift: 0.5, n_points: 5 }))?;
    let app = mean_similarity(Augmenter::AmplitudePhase(AmplitudePhase { sigma_amp: 4.0, sigma_phase: 1.0 }))?;
    // reverse and drift count as approximately equal within 0.1
    let ok = ww > rev.max(drift) && (rev - drift).abs() <= 0.1 && rev.min(drift) > app;
    check(
        ok,
        format!("window-warp {ww:.4} > reverse {rev:.4} ~ drift {drift:.4} > APP {app:.4}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("transform round trip", transform_round_trip),
        ("FFT oracle equivalence", fft_oracle),
        ("DTW oracle equivalence", dtw_oracle),
        ("determinism", determinism),
        ("identity", identity),
        ("probability gate statistics", gate_statistics),
        ("time scaling", scaling),
        ("mode overhead", mode_overhead),
        ("memory scaling", memory),
        ("quality ordering", quality_ordering),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let (status, detail) = match criterion() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{status}] {:>2}. {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
