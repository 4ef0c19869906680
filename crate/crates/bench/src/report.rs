//! Benchmark reports and their CSV / markdown renderings.
//!
//! Times are printed to four significant figures, accuracy and speedup to
//! two decimals.

use std::fmt::Write as _;

use crate::config::OutputFormat;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageMedians {
    /// Coding over Ψ (for one-stage methods, the whole solve).
    pub encode: f64,
    /// Coding over Ω; TSSR only.
    pub second_stage: Option<f64>,
    pub classify: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodRow {
    pub method: String,
    /// Percent correct on the test set.
    pub accuracy: f64,
    /// Seconds per query.
    pub mean_time: f64,
    pub median_time: f64,
    pub std_time: f64,
    pub stages: Option<StageMedians>,
    /// Mean time of the slowest method divided by this method's.
    pub speedup: f64,
    /// Predicted label per test query.
    pub predictions: Vec<usize>,
    /// Every timed classification, in seconds.
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<MethodRow>,
    pub k: usize,
    pub train_size: usize,
    pub test_size: usize,
    /// Untimed-in-queries setup cost, `(what, seconds)`.
    pub build_times: Vec<(String, f64)>,
}

impl BenchReport {
    pub fn fill_speedups(&mut self) {
        let slowest = self.rows.iter().map(|r| r.mean_time).fold(0.0f64, f64::max);
        for r in &mut self.rows {
            r.speedup = if r.mean_time > 0.0 { slowest / r.mean_time } else { 1.0 };
        }
    }

    pub fn row(&self, method: &str) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

pub const CSV_HEADER: &str =
    "method,accuracy_pct,mean_time_s,median_time_s,std_time_s,encode_s,second_stage_s,classify_s,speedup";

fn time(t: f64) -> String {
    format!("{t:.3e}")
}

pub fn emit_report(report: &BenchReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(report),
        OutputFormat::Markdown => emit_markdown(report),
    }
}

fn emit_csv(report: &BenchReport) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in &report.rows {
        let (enc, second, cls) = match r.stages {
            Some(s) => (
                time(s.encode),
                s.second_stage.map(time).unwrap_or_default(),
                time(s.classify),
            ),
            None => Default::default(),
        };
        writeln!(
            out,
            "{},{:.2},{},{},{},{enc},{second},{cls},{:.2}",
            r.method,
            r.accuracy,
            time(r.mean_time),
            time(r.median_time),
            time(r.std_time),
            r.speedup
        )
        .expect("writing to a String");
    }
    out
}

fn emit_markdown(report: &BenchReport) -> String {
    let mut out = String::from("| Method | Acc. (%) | T. (s) | Speed up |\n|---|---:|---:|---:|\n");
    for r in &report.rows {
        writeln!(
            out,
            "| {} | {:.2} | {} | {:.2} |",
            r.method,
            r.accuracy,
            time(r.mean_time),
            r.speedup
        )
        .expect("writing to a String");
    }
    out
}

/// Read back rows written by the CSV emitter. Predictions and raw times are
/// not part of the format and come back empty.
pub fn parse_report_csv(text: &str) -> Result<Vec<MethodRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(BenchError::Config("report CSV: missing or unexpected header".into())),
    }
    lines
        .map(|(i, line)| {
            let bad = |what: &str| BenchError::Config(format!("report CSV line {}: bad {what}", i + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(bad("field count"));
            }
            let num = |idx: usize, what: &str| f[idx].parse::<f64>().map_err(|_| bad(what));
            let opt = |idx: usize, what: &str| -> Result<Option<f64>> {
                if f[idx].is_empty() {
                    Ok(None)
                } else {
                    num(idx, what).map(Some)
                }
            };
            let encode = opt(5, "encode time")?;
            let classify = opt(7, "classify time")?;
            let stages = match (encode, classify) {
                (Some(encode), Some(classify)) => Some(StageMedians {
                    encode,
                    second_stage: opt(6, "second-stage time")?,
                    classify,
                }),
                _ => None,
            };
            Ok(MethodRow {
                method: f[0].to_string(),
                accuracy: num(1, "accuracy")?,
                mean_time: num(2, "mean time")?,
                median_time: num(3, "median time")?,
                std_time: num(4, "std time")?,
                stages,
                speedup: num(8, "speedup")?,
                predictions: Vec::new(),
                times: Vec::new(),
            })
        })
        .collect()
}
