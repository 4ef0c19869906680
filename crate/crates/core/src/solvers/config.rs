use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::linalg::{residual_norm, Dictionary, Support, Vector};

/// Settings shared by every solver. Fields a solver does not use must be
/// left unset; each solver validates its own subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub max_iterations: usize,
    /// Residual `‖y − Φx‖₂` at which iteration stops.
    pub tolerance: f64,
    pub sparsity_k: Option<usize>,
    /// Penalty weight of the penalized objectives.
    pub lambda: Option<f64>,
    /// Smoothing weight of the linearized Bregman objective.
    pub alpha: Option<f64>,
    /// `ℓp` exponent for generalized shrinkage.
    pub p_norm: Option<f64>,
}

impl SolveConfig {
    pub fn new(max_iterations: usize, tolerance: f64) -> Self {
        Self {
            max_iterations,
            tolerance,
            sparsity_k: None,
            lambda: None,
            alpha: None,
            p_norm: None,
        }
    }

    pub fn with_sparsity(mut self, k: usize) -> Self {
        self.sparsity_k = Some(k);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_p_norm(mut self, p: f64) -> Self {
        self.p_norm = Some(p);
        self
    }

    /// Check the fields common to all solvers plus the per-solver rules.
    pub(crate) fn validate(&self, solver: &str, n: usize, rules: Fields) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(format!("{solver}: {msg}")));
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        check_field(solver, "sparsity_k", self.sparsity_k.is_some(), rules.sparsity_k)?;
        check_field(solver, "lambda", self.lambda.is_some(), rules.lambda)?;
        check_field(solver, "alpha", self.alpha.is_some(), rules.alpha)?;
        check_field(solver, "p_norm", self.p_norm.is_some(), rules.p_norm)?;
        if let Some(k) = self.sparsity_k {
            if k == 0 || k > n {
                return bad(format!("sparsity_k must be in 1..={n}, got {k}"));
            }
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return bad(format!("lambda must be nonnegative, got {l}"));
            }
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("alpha must be positive, got {a}"));
            }
        }
        if let Some(p) = self.p_norm {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("p_norm must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Use {
    Required,
    Optional,
    Forbidden,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Fields {
    pub sparsity_k: Use,
    pub lambda: Use,
    pub alpha: Use,
    pub p_norm: Use,
}

fn check_field(solver: &str, name: &str, set: bool, rule: Use) -> Result<()> {
    match (rule, set) {
        (Use::Required, false) => Err(Error::InvalidConfig(format!("{solver}: {name} is required"))),
        (Use::Forbidden, true) => Err(Error::InvalidConfig(format!(
            "{solver}: {name} is not used and must be unset"
        ))),
        _ => Ok(()),
    }
}

/// Output of every solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSolution {
    pub x: Vector,
    /// Indices of the nonzero entries of `x`.
    pub support: Support,
    /// `‖y − Φx‖₂`, recomputed from the returned `x`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub wall_time: Duration,
    pub converged: bool,
    /// Per-iteration objective for the penalized solvers; empty otherwise.
    pub objective_trace: Vec<f64>,
    /// Factor the dictionary was internally multiplied by (IHT); 1 elsewhere.
    pub dictionary_scale: f64,
}

impl SparseSolution {
    pub(crate) fn finish<D: Dictionary + ?Sized>(
        phi: &D,
        y: &[f64],
        x: Vec<f64>,
        iterations: usize,
        converged: bool,
        started: Instant,
    ) -> Self {
        let residual_norm = residual_norm(phi, y, &x);
        let x = Vector::from_parts(x);
        Self {
            support: x.support(),
            x,
            residual_norm,
            iterations,
            wall_time: started.elapsed(),
            converged,
            objective_trace: Vec::new(),
            dictionary_scale: 1.0,
        }
    }

    pub(crate) fn zero(n: usize, y_norm: f64, started: Instant) -> Self {
        Self {
            x: Vector::zeros(n),
            support: Support::empty(),
            residual_norm: y_norm,
            iterations: 0,
            wall_time: started.elapsed(),
            converged: true,
            objective_trace: Vec::new(),
            dictionary_scale: 1.0,
        }
    }

    /// Wrap as `Ok` when converged, else as [`Error::MaxIterations`]
    /// carrying this iterate.
    pub(crate) fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::MaxIterations {
                iterations: self.iterations,
                partial: Box::new(self),
            })
        }
    }

    /// Equality ignoring wall time, for determinism checks.
    pub fn same_result(&self, other: &Self) -> bool {
        self.x == other.x
            && self.support == other.support
            && self.residual_norm.to_bits() == other.residual_norm.to_bits()
            && self.iterations == other.iterations
            && self.converged == other.converged
            && self.objective_trace == other.objective_trace
            && self.dictionary_scale == other.dictionary_scale
    }
}

pub(crate) fn check_dims<D: Dictionary + ?Sized>(phi: &D, y: &[f64]) -> Result<()> {
    if y.len() != phi.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "signal has {} entries, dictionary has {} rows",
            y.len(),
            phi.nrows()
        )));
    }
    Ok(())
}

/// `‖a − b‖ ≤ 1e-8·‖a‖`, with two zero vectors counting as unchanged.
pub(crate) fn relative_change_small(new: &[f64], old: &[f64]) -> bool {
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (a, b) in new.iter().zip(old) {
        diff += (a - b) * (a - b);
        norm += a * a;
    }
    diff <= 1e-16 * norm || (diff == 0.0 && norm == 0.0)
}
