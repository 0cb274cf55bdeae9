use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::thread;
use std::time::Duration;

use crate::{BenchError, Result};

const SAMPLE_INTERVAL: Duration = Duration::from_millis(2);

/// Current resident-set size in bytes, read from `/proc/self/status`.
pub fn rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Runs `work` while a watcher thread samples the resident-set size.
///
/// Returns the work's result and the peak observed above the pre-work
/// baseline, in megabytes (2^20 bytes).
pub fn measure_peak_memory<R, F: FnOnce() -> R>(work: F) -> Result<(R, f64)> {
    let baseline = rss_bytes().ok_or(BenchError::UnsupportedPlatform)?;
    let peak = AtomicU64::new(baseline);
    let done = AtomicBool::new(false);

    let out = thread::scope(|s| {
        s.spawn(|| {
            while !done.load(Ordering::Relaxed) {
                if let Some(rss) = rss_bytes() {
                    peak.fetch_max(rss, Ordering::Relaxed);
                }
                thread::sleep(SAMPLE_INTERVAL);
            }
        });
        let out = work();
        // catch anything still resident at the end that fell between samples
        if let Some(rss) = rss_bytes() {
            peak.fetch_max(rss, Ordering::Relaxed);
        }
        done.store(true, Ordering::Relaxed);
        out
    });

    let above = peak.load(Ordering::Relaxed).saturating_sub(baseline);
    Ok((out, above as f64 / (1024.0 * 1024.0)))
}
