use std::time::{Duration, Instant};

use log::info;
use tssr_core::dataio::{split, synth_classification, LabeledDataset, SplitSpec};
use tssr_core::linalg::{normalize_columns, residual_norm, Matrix};
use tssr_core::solvers::Method;
use tssr_core::tssr::{
    build_model_with, choose_sparsity, restrict, tssr_pipeline, Classification, ModelOptions, TssrModel,
};
use tssr_core::{PartialSolution, SolveConfig, Vector};

use crate::config::{uses_sparsity, BenchConfig, DatasetSpec, MethodKind, SparsityChoice};
use crate::error::{BenchError, Result};
use crate::report::{BenchReport, MethodRow, StageMedians};

/// Worker count from `BENCH_THREADS`, default 1.
pub fn worker_count() -> usize {
    std::env::var("BENCH_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(1)
}

/// Train and test data after splitting and column normalization.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub psi: Matrix,
    pub train_labels: Vec<usize>,
    pub class_count: usize,
    pub queries: Vec<Vector>,
    pub truth: Vec<usize>,
    pub k: usize,
}

pub fn load_dataset(cfg: &BenchConfig) -> Result<LabeledDataset> {
    match &cfg.dataset {
        DatasetSpec::Synthetic {
            classes,
            per_class,
            m,
            spread,
        } => synth_classification(*classes, *per_class, *m, *spread, cfg.seed)
            .map_err(|e| BenchError::core("generating dataset", e)),
        DatasetSpec::File { matrix, labels } => {
            LabeledDataset::load(matrix, labels).map_err(|e| BenchError::core("loading dataset", e))
        }
    }
}

pub fn prepare(cfg: &BenchConfig) -> Result<Prepared> {
    let ds = load_dataset(cfg)?;
    let spec = SplitSpec {
        train_per_class: cfg.train_per_class,
        test_per_class: cfg.test_per_class,
        seed: cfg.seed,
    };
    let (train, test) = split(&ds, &spec).map_err(|e| BenchError::core("splitting dataset", e))?;
    let psi = normalize_columns(&train.samples).map_err(|e| BenchError::core("normalizing training data", e))?;
    let k = match cfg.k {
        SparsityChoice::Fixed(k) => k,
        SparsityChoice::Auto => {
            choose_sparsity(psi.rows(), psi.cols()).map_err(|e| BenchError::core("choosing sparsity", e))?
        }
    };
    if k > psi.cols().min(psi.rows()) {
        return Err(BenchError::Config(format!(
            "k = {k} exceeds min(m, N) = {}",
            psi.cols().min(psi.rows())
        )));
    }
    let queries = (0..test.len())
        .map(|j| {
            let col = test.samples.column(j);
            let norm = tssr_core::linalg::norm2(col);
            let scaled = if norm > 0.0 {
                col.iter().map(|v| v / norm).collect()
            } else {
                col.to_vec()
            };
            Vector::new(scaled).expect("finite")
        })
        .collect();
    Ok(Prepared {
        psi,
        train_labels: train.labels,
        class_count: ds.class_count,
        queries,
        truth: test.labels,
        k,
    })
}

/// One-stage SRC: residual `‖y − Ψ·δ_c(x)‖₂` per class.
pub fn classify_signal_space(
    psi: &Matrix,
    labels: &[usize],
    class_count: usize,
    x: &[f64],
    y: &[f64],
) -> tssr_core::Result<Classification> {
    let residuals = (0..class_count)
        .map(|c| residual_norm(psi, y, &restrict(x, labels, c)))
        .collect();
    Classification::from_residuals(residuals)
}

/// Result of classifying one query once.
#[derive(Debug, Clone, Copy)]
struct Trial {
    label: usize,
    total: Duration,
    encode: Duration,
    second_stage: Option<Duration>,
    classify: Duration,
}

enum Runner<'a> {
    Tssr(&'a TssrModel),
    OneStage {
        method: Method,
        solve: SolveConfig,
        data: &'a Prepared,
    },
}

impl Runner<'_> {
    fn classify(&self, y: &Vector) -> tssr_core::Result<Trial> {
        match self {
            Runner::Tssr(model) => {
                let t = Instant::now();
                let out = tssr_pipeline(model, y)?;
                let total = t.elapsed();
                Ok(Trial {
                    label: out.classification.label,
                    total,
                    encode: out.timings.encode,
                    second_stage: Some(out.timings.second_stage),
                    classify: out.timings.classify,
                })
            }
            Runner::OneStage { method, solve, data } => {
                let t0 = Instant::now();
                let sol = method.solve(&data.psi, y, solve).or_partial()?;
                let t1 = Instant::now();
                let class = classify_signal_space(&data.psi, &data.train_labels, data.class_count, &sol.x, y)?;
                let t2 = Instant::now();
                Ok(Trial {
                    label: class.label,
                    total: t2 - t0,
                    encode: t1 - t0,
                    second_stage: None,
                    classify: t2 - t1,
                })
            }
        }
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    run_bench_with_threads(cfg, worker_count())
}

pub fn run_bench_with_threads(cfg: &BenchConfig, threads: usize) -> Result<BenchReport> {
    cfg.validate()?;
    let data = prepare(cfg)?;
    let mut report = BenchReport {
        k: data.k,
        train_size: data.psi.cols(),
        test_size: data.queries.len(),
        ..BenchReport::default()
    };

    let model = if cfg.methods.iter().any(|m| m.kind == MethodKind::Tssr) {
        let opts = ModelOptions {
            stage1: cfg.stage1.clone(),
            rip_trials: cfg.rip_trials,
            rip_seed: cfg.seed,
            ..ModelOptions::new(data.k)
        };
        let t = Instant::now();
        let model = build_model_with(&data.psi, &data.train_labels, &opts)
            .map_err(|e| BenchError::core("building tssr model", e))?;
        let elapsed = t.elapsed().as_secs_f64();
        info!(
            "tssr model built in {elapsed:.3} s (diag dominance {:.3})",
            model.diag_dominance()
        );
        report.build_times.push(("tssr_model".to_string(), elapsed));
        Some(model)
    } else {
        None
    };

    for spec in &cfg.methods {
        let runner = match spec.kind {
            MethodKind::Tssr => Runner::Tssr(model.as_ref().expect("built above")),
            MethodKind::OneStage(method) => {
                let mut solve = spec.solve.clone();
                if uses_sparsity(method) && solve.sparsity_k.is_none() {
                    solve.sparsity_k = Some(data.k);
                }
                Runner::OneStage {
                    method,
                    solve,
                    data: &data,
                }
            }
        };
        let trials = run_queries(&runner, &data.queries, cfg.repetitions, threads)
            .map_err(|(j, e)| BenchError::core(format!("method {}, test sample {j}", spec.kind), e))?;
        report.rows.push(summarize(spec.kind.name(), &trials, &data.truth));
    }
    report.fill_speedups();
    Ok(report)
}

/// `trials[j][r]` for query `j`, repetition `r`. Queries are dealt to
/// workers round-robin; each worker times one solve at a time.
fn run_queries(
    runner: &Runner<'_>,
    queries: &[Vector],
    reps: usize,
    threads: usize,
) -> std::result::Result<Vec<Vec<Trial>>, (usize, tssr_core::Error)> {
    let one = |j: usize| -> std::result::Result<Vec<Trial>, (usize, tssr_core::Error)> {
        (0..reps)
            .map(|_| runner.classify(&queries[j]).map_err(|e| (j, e)))
            .collect()
    };
    if threads <= 1 || queries.len() <= 1 {
        return (0..queries.len()).map(one).collect();
    }
    let threads = threads.min(queries.len());
    let mut slots: Vec<Option<std::result::Result<Vec<Trial>, _>>> = (0..queries.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let one = &one;
                s.spawn(move || {
                    (w..queries.len())
                        .step_by(threads)
                        .map(|j| (j, one(j)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (j, r) in h.join().expect("worker panicked") {
                slots[j] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every query assigned")).collect()
}

fn summarize(method: String, trials: &[Vec<Trial>], truth: &[usize]) -> MethodRow {
    let predictions: Vec<usize> = trials.iter().map(|t| t[0].label).collect();
    let correct = predictions.iter().zip(truth).filter(|(p, t)| p == t).count();
    let accuracy = if truth.is_empty() {
        0.0
    } else {
        100.0 * correct as f64 / truth.len() as f64
    };
    let flat = |f: &dyn Fn(&Trial) -> Option<Duration>| -> Vec<f64> {
        trials
            .iter()
            .flatten()
            .filter_map(|t| f(t).map(|d| d.as_secs_f64()))
            .collect()
    };
    let times = flat(&|t| Some(t.total));
    let second = flat(&|t| t.second_stage);
    MethodRow {
        method,
        accuracy,
        mean_time: mean(&times),
        median_time: median(&times),
        std_time: std_dev(&times),
        stages: Some(StageMedians {
            encode: median(&flat(&|t| Some(t.encode))),
            second_stage: (!second.is_empty()).then(|| median(&second)),
            classify: median(&flat(&|t| Some(t.classify))),
        }),
        speedup: 1.0,
        predictions,
        times,
    }
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}

/// Sample standard deviation; zero for fewer than two values.
pub fn std_dev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mu = mean(v);
    (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}
