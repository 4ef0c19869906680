//! Benchmark configuration.
//!
//! ```text
//! seed = 7
//! dataset = synthetic            # or `file`
//! synth.classes = 40
//! synth.per_class = 20
//! synth.m = 256
//! synth.spread = 0.2
//! # data.matrix = faces.bin     # with dataset = file
//! # data.labels = faces.labels
//! split.train_per_class = 10
//! split.test_per_class = rest
//! k = auto
//! repetitions = 10
//! format = markdown
//! methods = tssr, cosamp_src, fista_src, alb_src
//! method.fista_src.lambda = 0.01
//! tssr.stage1.max_iterations = 3000
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tssr_core::dataio::TestCount;
use tssr_core::solvers::Method;
use tssr_core::tssr::default_stage1_config;
use tssr_core::SolveConfig;

use crate::error::{BenchError, Result};
use crate::kv::KvMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(BenchError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    Synthetic {
        classes: usize,
        per_class: usize,
        m: usize,
        spread: f64,
    },
    File {
        matrix: PathBuf,
        labels: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityChoice {
    /// Largest K allowed by the Welch bound for the training dictionary.
    Auto,
    Fixed(usize),
}

impl FromStr for SparsityChoice {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(SparsityChoice::Auto);
        }
        s.parse()
            .ok()
            .filter(|&k| k > 0)
            .map(SparsityChoice::Fixed)
            .ok_or_else(|| BenchError::Config(format!("k must be `auto` or a positive integer, got `{s}`")))
    }
}

/// Benchmarked classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Tssr,
    /// Code the query over Ψ with a one-stage solver, then SRC in signal
    /// space.
    OneStage(Method),
}

impl MethodKind {
    pub const ALL: [MethodKind; 8] = [
        MethodKind::Tssr,
        MethodKind::OneStage(Method::Cosamp),
        MethodKind::OneStage(Method::Omp),
        MethodKind::OneStage(Method::Fista),
        MethodKind::OneStage(Method::Ista),
        MethodKind::OneStage(Method::Iht),
        MethodKind::OneStage(Method::Lb),
        MethodKind::OneStage(Method::Alb),
    ];

    pub fn name(self) -> String {
        match self {
            MethodKind::Tssr => "tssr".to_string(),
            MethodKind::OneStage(m) => format!("{m}_src"),
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for MethodKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        MethodKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown method `{s}`")))
    }
}

/// Per-method solver settings; `sparsity_k` is filled in from the resolved K
/// where the solver takes one.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub kind: MethodKind,
    pub solve: SolveConfig,
}

pub fn default_solve_config(method: Method) -> SolveConfig {
    match method {
        Method::Omp | Method::Cosamp => SolveConfig::new(100, 1e-10),
        Method::Ista | Method::Fista => SolveConfig::new(500, 1e-10).with_lambda(0.01),
        Method::Iht => SolveConfig::new(500, 1e-10).with_lambda(1e-3),
        Method::Lb | Method::Alb => SolveConfig::new(500, 1e-6),
    }
}

/// Whether the solver takes the benchmark K.
pub fn uses_sparsity(method: Method) -> bool {
    matches!(method, Method::Omp | Method::Cosamp | Method::Lb | Method::Alb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub dataset: DatasetSpec,
    pub train_per_class: usize,
    pub test_per_class: TestCount,
    pub k: SparsityChoice,
    pub repetitions: usize,
    pub format: OutputFormat,
    pub methods: Vec<MethodSpec>,
    pub stage1: SolveConfig,
    pub rip_trials: u64,
}

impl BenchConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        // Relative data paths resolve against the config file.
        if let DatasetSpec::File { matrix, labels } = &mut cfg.dataset {
            let base = path.parent().unwrap_or(Path::new("."));
            for p in [matrix, labels] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KvMap::parse(text)?;
        let seed = kv.take_or("seed", 0u64)?;
        let dataset = match kv.take_str("dataset").as_deref().unwrap_or("synthetic") {
            "synthetic" => DatasetSpec::Synthetic {
                classes: kv.take_or("synth.classes", 40)?,
                per_class: kv.take_or("synth.per_class", 20)?,
                m: kv.take_or("synth.m", 256)?,
                spread: kv.take_or("synth.spread", 0.2)?,
            },
            "file" => DatasetSpec::File {
                matrix: kv.require::<String>("data.matrix")?.into(),
                labels: kv.require::<String>("data.labels")?.into(),
            },
            other => return Err(BenchError::Config(format!("unknown dataset kind `{other}`"))),
        };
        let train_per_class = kv.take_or("split.train_per_class", 10)?;
        let test_per_class = match kv.take_str("split.test_per_class").as_deref() {
            None | Some("rest") => TestCount::Rest,
            Some(n) => TestCount::Count(n.parse().map_err(|_| {
                BenchError::Config(format!("split.test_per_class must be `rest` or a count, got `{n}`"))
            })?),
        };
        let k = kv.take_or("k", SparsityChoice::Auto)?;
        let repetitions = kv.take_or("repetitions", 1usize)?;
        let format = kv.take_or("format", OutputFormat::Markdown)?;

        let names = kv.take_str("methods").unwrap_or_else(|| "tssr,cosamp_src".to_string());
        let mut methods = Vec::new();
        for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let kind: MethodKind = name.parse()?;
            if methods.iter().any(|m: &MethodSpec| m.kind == kind) {
                return Err(BenchError::Config(format!("method `{name}` listed twice")));
            }
            let solve = match kind {
                MethodKind::Tssr => SolveConfig::new(100, 1e-10),
                MethodKind::OneStage(m) => default_solve_config(m),
            };
            methods.push(MethodSpec { kind, solve });
        }
        for (rest, line, value) in kv.take_prefixed("method.") {
            let Some((name, field)) = rest.split_once('.') else {
                return Err(BenchError::Config(format!(
                    "line {line}: expected `method.<name>.<field>`"
                )));
            };
            let kind: MethodKind = name.parse()?;
            let spec = methods
                .iter_mut()
                .find(|m| m.kind == kind)
                .ok_or_else(|| BenchError::Config(format!("line {line}: method `{name}` is not in `methods`")))?;
            if kind == MethodKind::Tssr {
                return Err(BenchError::Config(format!(
                    "line {line}: tssr settings live under `tssr.`, not `method.tssr.`"
                )));
            }
            apply_field(&mut spec.solve, field, &value, line)?;
        }

        let mut stage1 = default_stage1_config();
        for (field, line, value) in kv.take_prefixed("tssr.stage1.") {
            if matches!(field.as_str(), "lambda" | "p_norm" | "sparsity_k") {
                return Err(BenchError::Config(format!(
                    "line {line}: stage 1 does not use `{field}`"
                )));
            }
            apply_field(&mut stage1, &field, &value, line)?;
        }
        let rip_trials = kv.take_or("tssr.rip_trials", 200u64)?;
        kv.finish()?;

        let cfg = Self {
            seed,
            dataset,
            train_per_class,
            test_per_class,
            k,
            repetitions,
            format,
            methods,
            stage1,
            rip_trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(BenchError::Config("at least one method is required".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.train_per_class == 0 {
            return Err(BenchError::Config("split.train_per_class must be at least 1".into()));
        }
        Ok(())
    }
}

fn apply_field(cfg: &mut SolveConfig, field: &str, value: &str, line: usize) -> Result<()> {
    let bad = || BenchError::Config(format!("line {line}: invalid value `{value}` for `{field}`"));
    let float = || value.parse::<f64>().map_err(|_| bad());
    let opt_float = || -> Result<Option<f64>> {
        if value == "none" {
            Ok(None)
        } else {
            float().map(Some)
        }
    };
    match field {
        "max_iterations" => cfg.max_iterations = value.parse().map_err(|_| bad())?,
        "tolerance" => cfg.tolerance = float()?,
        "lambda" => cfg.lambda = opt_float()?,
        "alpha" => cfg.alpha = opt_float()?,
        "p_norm" => cfg.p_norm = opt_float()?,
        "sparsity_k" => {
            cfg.sparsity_k = if value == "none" {
                None
            } else {
                Some(value.parse().map_err(|_| bad())?)
            }
        }
        other => {
            return Err(BenchError::Config(format!(
                "line {line}: unknown solver field `{other}`"
            )))
        }
    }
    Ok(())
}
