use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tssr_bench::config::OutputFormat;
use tssr_bench::kv::KvMap;
use tssr_bench::{emit_report, run_bench, BenchConfig, BenchError, Result};
use tssr_core::dataio::{
    load_matrix, save_labels, save_matrix, synth_classification, synth_problem, synth_sensing, Format,
};
use tssr_core::diagnostics::{estimate_rip, mutual_coherence, welch_bound, KvRecord};
use tssr_core::linalg::normalize_columns;
use tssr_core::tssr::{choose_sparsity, sparsity_bound};
use tssr_core::Matrix;

#[derive(Parser)]
#[command(name = "bench", version, about = "Sparse representation classification benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or markdown; overrides the config.
        #[arg(long)]
        format: Option<String>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Coherence, Welch bound, RIP estimate and suggested K for a matrix.
    Diag {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        /// Monte Carlo supports when exhaustive enumeration is too large.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate synthetic data from a key-value spec.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run {
            config,
            out,
            format,
            seed,
        } => cmd_run(&config, out.as_deref(), format.as_deref(), seed),
        Command::Diag {
            matrix,
            k,
            trials,
            seed,
        } => cmd_diag(&matrix, k, trials, seed),
        Command::Synth { spec, out } => cmd_synth(&spec, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn cmd_run(config: &Path, out: Option<&Path>, format: Option<&str>, seed: Option<u64>) -> Result<()> {
    let mut cfg = BenchConfig::from_file(config)?;
    if let Some(f) = format {
        cfg.format = f.parse::<OutputFormat>()?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = run_bench(&cfg)?;
    let text = emit_report(&report, cfg.format);
    for (what, secs) in &report.build_times {
        eprintln!("build {what}: {secs:.3e} s");
    }
    eprintln!(
        "k={} train={} test={} repetitions={}",
        report.k, report.train_size, report.test_size, cfg.repetitions
    );
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_diag(path: &Path, k: usize, trials: u64, seed: u64) -> Result<()> {
    let raw = load_matrix(path, Format::from_path(path)).map_err(|e| BenchError::core("loading matrix", e))?;
    let a = normalize_columns(&raw).map_err(|e| BenchError::core("normalizing columns", e))?;
    let (m, n) = a.shape();
    let mut out = format!("matrix.rows={m}\nmatrix.cols={n}\n");
    match mutual_coherence(&a) {
        Ok(c) => out += &format!("coherence={c}\n"),
        Err(e) => out += &format!("coherence=n/a ({e})\n"),
    }
    if let Ok(w) = welch_bound(m, n) {
        out += &format!("welch_bound={w}\n");
    }
    match (sparsity_bound(m, n), choose_sparsity(m, n)) {
        (Ok(b), Ok(kk)) => out += &format!("sparsity_bound={b}\nchosen_k={kk}\n"),
        _ => out += "chosen_k=n/a (needs N > m)\n",
    }
    let rip = estimate_rip(&a, k, trials, seed).map_err(|e| BenchError::core("estimating RIP", e))?;
    out += &rip.to_kv();
    print!("{out}");
    Ok(())
}

/// `kind = sensing | problem | classification`, plus generator parameters.
/// `classification` also writes labels next to the matrix (`.labels`);
/// `problem` writes `x_true` and `y` as single-column CSV files.
fn cmd_synth(spec: &Path, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(spec)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", spec.display())))?;
    let mut kv = KvMap::parse(&text)?;
    let kind = kv.require::<String>("kind")?;
    let seed = kv.take_or("seed", 0u64)?;
    let format = Format::from_path(out);
    let core = |what: &str| {
        let what = what.to_string();
        move |e| BenchError::core(what, e)
    };
    match kind.as_str() {
        "sensing" => {
            let ensemble = kv.require::<String>("ensemble")?.parse().map_err(core("ensemble"))?;
            let (m, n) = (kv.require("m")?, kv.require("n")?);
            kv.finish()?;
            let a = synth_sensing(ensemble, m, n, seed).map_err(core("generating"))?;
            save_matrix(out, &a, format).map_err(core("writing"))?;
        }
        "problem" => {
            let ensemble = kv
                .take_str("ensemble")
                .unwrap_or_else(|| "gaussian".into())
                .parse()
                .map_err(core("ensemble"))?;
            let (m, n, k) = (kv.require("m")?, kv.require("n")?, kv.require("k")?);
            let noise = kv.take_or("noise_sigma", 0.0)?;
            kv.finish()?;
            let p = synth_problem(m, n, k, noise, ensemble, seed).map_err(core("generating"))?;
            save_matrix(out, &p.phi, format).map_err(core("writing"))?;
            for (suffix, v) in [("x", &p.x_true), ("y", &p.y)] {
                let col = Matrix::from_col_major(v.len(), 1, v.to_vec()).map_err(core("writing"))?;
                save_matrix(&sibling(out, suffix, "csv"), &col, Format::Csv).map_err(core("writing"))?;
            }
        }
        "classification" => {
            let classes = kv.require("classes")?;
            let per_class = kv.require("per_class")?;
            let m = kv.require("m")?;
            let spread = kv.take_or("spread", 0.2)?;
            kv.finish()?;
            let ds = synth_classification(classes, per_class, m, spread, seed).map_err(core("generating"))?;
            save_matrix(out, &ds.samples, format).map_err(core("writing"))?;
            save_labels(&out.with_extension("labels"), &ds.labels).map_err(core("writing"))?;
        }
        other => return Err(BenchError::Config(format!("unknown synth kind `{other}`"))),
    }
    Ok(())
}

/// `data.bin` → `data.<suffix>.<ext>`.
fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}
