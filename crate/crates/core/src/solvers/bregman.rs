//! Linearized Bregman (LB) and its Nesterov-accelerated variant (ALB) for
//!
//! `min ‖x‖₁ + 1/(2α)‖x‖₂²  s.t.  Φx = y`.
//!
//! Both run gradient ascent on the dual with step `δ = 1/‖Φ‖₂²`, in the
//! accumulator form `v ← v + Φᵀ(y − Φx)`, `x = δ·shrink(v, α/δ)`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, norm_inf, sub, Dictionary, Matrix, Vector};

use super::config::{check_dims, Fields, Use};
use super::greedy::omp;
use super::threshold::soft_threshold;
use super::{SolveConfig, SparseSolution};

/// Iterate norm treated as divergence.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Dual gradient `‖Φᵀ(y − Φx)‖_∞`, relative to its value at `x = 0`, below
/// which the iteration is stationary.
pub const STATIONARY_GRADIENT: f64 = 1e-12;

/// `α` as a multiple of the estimated `‖x‖_∞`.
pub const ALPHA_MULTIPLIER: f64 = 10.0;

const FIELDS: Fields = Fields {
    sparsity_k: Use::Optional,
    lambda: Use::Forbidden,
    alpha: Use::Optional,
    p_norm: Use::Forbidden,
};

pub fn linearized_bregman<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    bregman(phi, y, cfg, false)
}

pub fn accelerated_lb<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    bregman(phi, y, cfg, true)
}

/// `α = 10·‖x̂‖_∞` with `x̂` from a short OMP pass (`K` from the config, else
/// `m/4`).
pub fn default_alpha<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<f64> {
    let m = phi.nrows();
    let k = cfg.sparsity_k.unwrap_or((m / 4).max(1)).min(phi.ncols());
    let pre = SolveConfig::new(k, cfg.tolerance).with_sparsity(k);
    let est = match omp(phi, y, &pre) {
        Ok(sol) => norm_inf(&sol.x),
        Err(Error::MaxIterations { partial, .. }) => norm_inf(&partial.x),
        // A signal orthogonal to every atom carries no scale information.
        Err(Error::NoProgress { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(if est > 0.0 { ALPHA_MULTIPLIER * est } else { 1.0 })
}

/// Source of the dual gradient `Φᵀ(y − Φx)` and the residual `‖y − Φx‖`.
trait DualGradient {
    fn len(&self) -> usize;
    fn gradient(&self, x: &[f64]) -> (Vec<f64>, f64);
}

struct Direct<'a, D: ?Sized> {
    phi: &'a D,
    y: &'a [f64],
}

impl<D: Dictionary + ?Sized> DualGradient for Direct<'_, D> {
    fn len(&self) -> usize {
        self.phi.ncols()
    }

    fn gradient(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let r = sub(self.y, &self.phi.apply(x));
        (self.phi.correlate(&r), norm2(&r))
    }
}

/// Gradient through a precomputed Gram matrix: `Φᵀy − (ΦᵀΦ)x`, costing
/// `O(N·nnz(x))` per iteration instead of `O(m·N)`.
pub(crate) struct GramSystem<'a> {
    pub gram: &'a Matrix,
    /// `Φᵀy`.
    pub correlation: &'a [f64],
    /// `‖y‖²`.
    pub target_norm_sq: f64,
}

impl DualGradient for GramSystem<'_> {
    fn len(&self) -> usize {
        self.gram.cols()
    }

    fn gradient(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let mut g = self.correlation.to_vec();
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                axpy(-xj, self.gram.column(j), &mut g);
            }
        }
        // ‖y − Φx‖² = ‖y‖² − xᵀΦᵀy − xᵀg
        let sq = self.target_norm_sq - dot(x, self.correlation) - dot(x, &g);
        (g, sq.max(0.0).sqrt())
    }
}

fn bregman<D: Dictionary + ?Sized>(
    phi: &D,
    y: &Vector,
    cfg: &SolveConfig,
    accelerated: bool,
) -> Result<SparseSolution> {
    let started = Instant::now();
    let name = if accelerated { "alb" } else { "lb" };
    cfg.validate(name, phi.ncols(), FIELDS)?;
    check_dims(phi, y)?;
    let n = phi.ncols();
    let y_norm = y.norm();
    if y_norm <= cfg.tolerance {
        return Ok(SparseSolution::zero(n, y_norm, started));
    }
    let alpha = match cfg.alpha {
        Some(a) => a,
        None => default_alpha(phi, y, cfg)?,
    };
    let system = Direct { phi, y: y.as_slice() };
    let (x, iterations, converged) = iterate(&system, phi.spectral_norm_sq(), alpha, cfg, accelerated)?;
    SparseSolution::finish(phi, y, x, iterations, converged, started).into_result()
}

/// ALB over a Gram system; the final residual is recomputed against `phi`.
pub(crate) fn accelerated_lb_gram(
    phi: &Matrix,
    system: &GramSystem<'_>,
    y: &[f64],
    alpha: f64,
    cfg: &SolveConfig,
) -> Result<SparseSolution> {
    let started = Instant::now();
    cfg.validate("alb", phi.cols(), FIELDS)?;
    let y_norm = system.target_norm_sq.sqrt();
    if y_norm <= cfg.tolerance {
        return Ok(SparseSolution::zero(phi.cols(), y_norm, started));
    }
    let (x, iterations, converged) = iterate(system, phi.spectral_norm_sq(), alpha, cfg, true)?;
    SparseSolution::finish(phi, y, x, iterations, converged, started).into_result()
}

fn iterate<G: DualGradient>(
    system: &G,
    spectral_sq: f64,
    alpha: f64,
    cfg: &SolveConfig,
    accelerated: bool,
) -> Result<(Vec<f64>, usize, bool)> {
    let n = system.len();
    let delta = 1.0 / spectral_sq;
    let mu = alpha / delta;
    let primal = |v: &[f64]| -> Vec<f64> { v.iter().map(|&vi| delta * soft_threshold(vi, mu)).collect() };

    // Start the dual at w₀ = t·y with t chosen so the largest accumulator
    // entry sits exactly at the shrinkage threshold; this skips the initial
    // stagnation phase where x stays zero.
    let mut x = vec![0.0; n];
    let (g0, _) = system.gradient(&x);
    let g0_max = norm_inf(&g0);
    if g0_max == 0.0 {
        return Ok((x, 0, true));
    }
    let mut v: Vec<f64> = g0.iter().map(|g| g * mu / g0_max).collect();
    let mut v_ext = v.clone();

    for k in 0..cfg.max_iterations {
        let next = primal(&v_ext);
        let (g, res_norm) = system.gradient(&next);
        let next_norm = norm2(&next);
        if !next_norm.is_finite() || next_norm > DIVERGENCE_NORM {
            return Err(Error::Diverged {
                iteration: k + 1,
                norm: next_norm,
            });
        }
        let mut v_next = v_ext.clone();
        for (vi, gi) in v_next.iter_mut().zip(&g) {
            *vi += gi;
        }
        if accelerated {
            let theta = k as f64 / (k as f64 + 3.0);
            v_ext = v_next.iter().zip(&v).map(|(a, b)| a + theta * (a - b)).collect();
        } else {
            v_ext.clone_from(&v_next);
        }
        v = v_next;

        // A slowly moving iterate is not a stopping signal: LB stagnates on
        // a fixed support while the dual accumulates. Stop on feasibility,
        // or on dual stationarity when y is outside the range of Φ.
        x = next;
        if res_norm <= cfg.tolerance || norm_inf(&g) <= STATIONARY_GRADIENT * g0_max {
            return Ok((x, k + 1, true));
        }
    }
    Ok((x, cfg.max_iterations, false))
}
