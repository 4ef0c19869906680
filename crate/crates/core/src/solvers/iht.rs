//! Iterative hard thresholding for `min ½‖y − Φx‖² + λ‖x‖₀`.
//!
//! The quadratic term is majorized by
//! `½‖y − Φx‖² + ½‖x − z‖² − ½‖Φx − Φz‖²`, valid while `‖Φ‖₂ < 1`, so the
//! dictionary is rescaled below unit spectral norm first. Minimizing the
//! majorizer is a separable shrinkage of `z + Φᵀ(y − Φz)`: hard thresholding
//! at `√(2λ)`, or generalized shrinkage when an `ℓp` exponent is configured.

use std::time::Instant;

use crate::error::Result;
use crate::linalg::{norm2, sub, Dictionary, Vector};

use super::config::{check_dims, relative_change_small, Fields, Use};
use super::threshold::gst_shrink;
use super::{SolveConfig, SparseSolution};

/// Spectral norm the dictionary is scaled down to.
pub const IHT_TARGET_NORM: f64 = 0.999;

/// `½‖y − Φx‖² + λ Σ|x_j|^p`, counting nonzeros when `p = 0`.
pub fn lp_objective<D: Dictionary + ?Sized>(phi: &D, y: &[f64], x: &[f64], lambda: f64, p: f64) -> f64 {
    let r = sub(y, &phi.apply(x));
    0.5 * norm2(&r).powi(2) + lambda * lp_penalty(x, p)
}

fn lp_penalty(x: &[f64], p: f64) -> f64 {
    if p == 0.0 {
        x.iter().filter(|v| **v != 0.0).count() as f64
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum()
    }
}

/// Iterative hard (or generalized) thresholding.
///
/// `objective_trace` logs the objective of the rescaled problem after every
/// iteration; for `p = 0` it equals the objective in the original
/// coordinates. `dictionary_scale` reports the rescaling factor `s`; the
/// returned `x` is in original coordinates (`x = s·x'`).
pub fn iht<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    let started = Instant::now();
    let n = phi.ncols();
    cfg.validate(
        "iht",
        n,
        Fields {
            sparsity_k: Use::Forbidden,
            lambda: Use::Required,
            alpha: Use::Forbidden,
            p_norm: Use::Optional,
        },
    )?;
    check_dims(phi, y)?;
    let lambda = cfg.lambda.expect("validated");
    let p = cfg.p_norm.unwrap_or(0.0);
    let y = y.as_slice();

    let norm = phi.spectral_norm_sq().sqrt();
    let scale = if norm > IHT_TARGET_NORM {
        IHT_TARGET_NORM / norm
    } else {
        1.0
    };

    // Iterate in scaled coordinates: Φ' = sΦ.
    let mut xs = vec![0.0; n];
    let mut phi_xs = vec![0.0; y.len()];
    let mut trace = vec![0.5 * norm2(y).powi(2)];
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        let r = sub(y, &phi_xs);
        let g = phi.correlate(&r);
        let next: Vec<f64> = xs
            .iter()
            .zip(&g)
            .map(|(xi, gi)| gst_shrink(xi + scale * gi, lambda, p))
            .collect();
        phi_xs = phi.apply(&next).into_iter().map(|v| v * scale).collect();
        let res_norm = norm2(&sub(y, &phi_xs));
        trace.push(0.5 * res_norm * res_norm + lambda * lp_penalty(&next, p));
        let stalled = relative_change_small(&next, &xs);
        xs = next;
        if stalled || res_norm <= cfg.tolerance {
            converged = true;
            break;
        }
    }
    let x: Vec<f64> = xs.iter().map(|v| v * scale).collect();
    let mut sol = SparseSolution::finish(phi, y, x, iterations, converged, started);
    sol.objective_trace = trace;
    sol.dictionary_scale = scale;
    sol.into_result()
}
