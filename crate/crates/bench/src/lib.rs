//! Benchmark harness: classifies a held-out test set with TSSR and with
//! one-stage sparse-coding classifiers on identical splits, timing every
//! query.

pub mod config;
pub mod error;
pub mod kv;
pub mod report;
pub mod run;

pub use config::{BenchConfig, MethodKind, OutputFormat};
pub use error::{BenchError, Result};
pub use report::{emit_report, parse_report_csv, BenchReport, MethodRow};
pub use run::{run_bench, run_bench_with_threads};
