use std::fmt;

use crate::solvers::SparseSolution;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage a TSSR query failed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Encode,
    SecondStage,
    Classify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Encode => "encode",
            Stage::SecondStage => "second-stage",
            Stage::Classify => "classify",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("column {0} has (near) zero norm")]
    ZeroColumn(usize),
    #[error("non-finite value at flat index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("support index {index} out of range for {cols} columns")]
    SupportOutOfRange { index: usize, cols: usize },
    #[error("restricted system is rank deficient: rank {rank} < {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("no progress: best atom correlation {correlation:e} below threshold")]
    NoProgress { correlation: f64 },
    #[error("no convergence after {iterations} iterations")]
    MaxIterations {
        iterations: usize,
        partial: Box<SparseSolution>,
    },
    #[error("iterates diverged (norm {norm:e}) at iteration {iteration}")]
    Diverged { iteration: usize, norm: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("class {0} has no training columns")]
    EmptyClass(usize),
    #[error("query vector is zero and cannot be classified")]
    DegenerateQuery,
    #[error("matrix has fewer than two columns")]
    SingleColumn,
    #[error("class {class} has {available} samples, {requested} requested")]
    InsufficientSamples {
        class: usize,
        available: usize,
        requested: usize,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn at_stage(self, stage: Stage) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

/// Accept the last iterate of a solver that ran out of iterations.
pub trait PartialSolution {
    fn or_partial(self) -> Result<SparseSolution>;
}

impl PartialSolution for Result<SparseSolution> {
    fn or_partial(self) -> Result<SparseSolution> {
        match self {
            Err(Error::MaxIterations { partial, .. }) => Ok(*partial),
            other => other,
        }
    }
}
