//! Sparse solvers: greedy pursuit (OMP, CoSaMP), proximal gradient (ISTA,
//! FISTA), iterative thresholding (IHT with generalized shrinkage) and
//! linearized Bregman (LB, ALB).
//!
//! Every solver takes a [`Dictionary`](crate::linalg::Dictionary), a signal
//! and a shared [`SolveConfig`], and returns a [`SparseSolution`]. Solvers
//! that exhaust `max_iterations` fail with
//! [`Error::MaxIterations`](crate::Error::MaxIterations), which carries the
//! last iterate.

mod bregman;
mod config;
mod greedy;
mod iht;
mod proximal;
mod threshold;

pub use bregman::{
    accelerated_lb, default_alpha, linearized_bregman, ALPHA_MULTIPLIER, DIVERGENCE_NORM, STATIONARY_GRADIENT,
};
pub(crate) use bregman::{accelerated_lb_gram, GramSystem};
pub use config::{SolveConfig, SparseSolution};
pub use greedy::{cosamp, omp, NO_PROGRESS_CORRELATION};
pub use iht::{iht, lp_objective, IHT_TARGET_NORM};
pub use proximal::{fista, ista, lasso_objective};
pub use threshold::{gst_shrink, gst_threshold, hard_threshold, soft_threshold};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Dictionary, Vector};

/// Solver selector for harnesses that treat methods uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Omp,
    Cosamp,
    Ista,
    Fista,
    Iht,
    Lb,
    Alb,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Omp,
        Method::Cosamp,
        Method::Ista,
        Method::Fista,
        Method::Iht,
        Method::Lb,
        Method::Alb,
    ];

    pub fn solve<D: Dictionary + ?Sized>(self, phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
        match self {
            Method::Omp => omp(phi, y, cfg),
            Method::Cosamp => cosamp(phi, y, cfg),
            Method::Ista => ista(phi, y, cfg),
            Method::Fista => fista(phi, y, cfg),
            Method::Iht => iht(phi, y, cfg),
            Method::Lb => linearized_bregman(phi, y, cfg),
            Method::Alb => accelerated_lb(phi, y, cfg),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Omp => "omp",
            Method::Cosamp => "cosamp",
            Method::Ista => "ista",
            Method::Fista => "fista",
            Method::Iht => "iht",
            Method::Lb => "lb",
            Method::Alb => "alb",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown solver `{s}`")))
    }
}
