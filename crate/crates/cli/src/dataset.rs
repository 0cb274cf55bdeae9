//! Reading and writing datasets: plain CSV rows or the `.ts` layout used by
//! the public time-series archives (`@` header lines, then one series per
//! line with a `:label` suffix).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use chronaug::Batch;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Ts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub format: Format,
    /// Header lines of a `.ts` file up to and including `@data`.
    pub header: Vec<String>,
    /// One label per series, `.ts` only.
    pub labels: Option<Vec<String>>,
    pub batch: Batch,
}

pub fn detect(text: &str) -> Format {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with('@') => Format::Ts,
        _ => Format::Csv,
    }
}

pub fn read(path: &Path, format: Option<Format>) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, format).map_err(|msg| CliError::Invalid(format!("{}: {msg}", path.display())))
}

pub fn parse(text: &str, format: Option<Format>) -> Result<Dataset, String> {
    match format.unwrap_or_else(|| detect(text)) {
        Format::Csv => parse_csv(text),
        Format::Ts => parse_ts(text),
    }
}

fn parse_values(fields: &str, line_no: usize) -> Result<Vec<f64>, String> {
    fields
        .split(',')
        .enumerate()
        .map(|(k, f)| {
            let f = f.trim();
            f64::from_str(f)
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("line {line_no}, field {}: '{f}' is not a finite number", k + 1))
        })
        .collect()
}

fn check_width(rows: &[Vec<f64>], row: &[f64], line_no: usize) -> Result<(), String> {
    match rows.first() {
        Some(first) if first.len() != row.len() => Err(format!(
            "line {line_no}: {} values, expected {} like the first series",
            row.len(),
            first.len()
        )),
        _ => Ok(()),
    }
}

fn to_batch(rows: Vec<Vec<f64>>) -> Result<Batch, String> {
    if rows.is_empty() {
        return Err("no series found".into());
    }
    Batch::from_rows(&rows).map_err(|e| e.to_string())
}

fn parse_csv(text: &str) -> Result<Dataset, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = parse_values(line, i + 1)?;
        check_width(&rows, &row, i + 1)?;
        rows.push(row);
    }
    Ok(Dataset { format: Format::Csv, header: Vec::new(), labels: None, batch: to_batch(rows)? })
}

fn parse_ts(text: &str) -> Result<Dataset, String> {
    let mut header = Vec::new();
    let mut in_data = false;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !in_data {
            if !line.starts_with('@') {
                return Err(format!("line {}: expected a header line or @data", i + 1));
            }
            if line.eq_ignore_ascii_case("@data") {
                in_data = true;
            }
            header.push(line.to_string());
            continue;
        }
        // univariate only: exactly one dimension followed by the label
        let (values, label) = match line.split_once(':') {
            Some((_, rest)) if rest.contains(':') => {
                return Err(format!("line {}: more than one dimension; only univariate data is supported", i + 1));
            }
            Some((v, l)) => (v, l.trim().to_string()),
            None => (line, String::new()),
        };
        let row = parse_values(values, i + 1)?;
        check_width(&rows, &row, i + 1)?;
        rows.push(row);
        labels.push(label);
    }
    if !in_data {
        return Err("missing @data line".into());
    }
    Ok(Dataset { format: Format::Ts, header, labels: Some(labels), batch: to_batch(rows)? })
}

fn push_row(out: &mut String, row: &[f64]) {
    for (k, v) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        // Debug prints the shortest string that parses back to the same value
        let _ = write!(out, "{v:?}");
    }
}

impl Dataset {
    /// Replaces the data, carrying labels along. When the series count grows
    /// by a whole factor (repeat), output series `k` takes the label of input
    /// series `k / factor`.
    pub fn with_batch(&self, batch: Batch) -> Dataset {
        let labels = self.labels.as_ref().map(|labels| {
            let factor = (batch.n() / labels.len()).max(1);
            (0..batch.n()).map(|k| labels[(k / factor).min(labels.len() - 1)].clone()).collect()
        });
        let header = self
            .header
            .iter()
            .map(|h| {
                let mut parts = h.split_whitespace();
                match parts.next() {
                    Some(key) if key.eq_ignore_ascii_case("@serieslength") => format!("{key} {}", batch.len()),
                    _ => h.clone(),
                }
            })
            .collect();
        Dataset { format: self.format, header, labels, batch }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        for (i, row) in self.batch.iter().enumerate() {
            push_row(&mut out, row);
            if let Some(labels) = &self.labels {
                if !labels[i].is_empty() {
                    out.push(':');
                    out.push_str(&labels[i]);
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}
