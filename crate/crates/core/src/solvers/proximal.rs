//! Proximal gradient for `min ½‖Φx − y‖² + λ‖x‖₁` (ISTA and FISTA).

use std::time::Instant;

use crate::error::Result;
use crate::linalg::{norm1, norm2, sub, Dictionary, Vector};

use super::config::{check_dims, relative_change_small, Fields, Use};
use super::threshold::soft_threshold;
use super::{SolveConfig, SparseSolution};

/// Slack on the power-iteration estimate so `1/L` is a safe step.
pub(crate) const LIPSCHITZ_SLACK: f64 = 1.0 + 1e-6;

const FIELDS: Fields = Fields {
    sparsity_k: Use::Forbidden,
    lambda: Use::Required,
    alpha: Use::Forbidden,
    p_norm: Use::Forbidden,
};

/// `½‖Φx − y‖² + λ‖x‖₁`.
pub fn lasso_objective<D: Dictionary + ?Sized>(phi: &D, y: &[f64], x: &[f64], lambda: f64) -> f64 {
    let r = sub(&phi.apply(x), y);
    0.5 * norm2(&r).powi(2) + lambda * norm1(x)
}

pub fn ista<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    proximal_gradient(phi, y, cfg, false, "ista")
}

/// ISTA with Nesterov extrapolation (Beck–Teboulle momentum).
pub fn fista<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    proximal_gradient(phi, y, cfg, true, "fista")
}

fn proximal_gradient<D: Dictionary + ?Sized>(
    phi: &D,
    y: &Vector,
    cfg: &SolveConfig,
    accelerated: bool,
    name: &str,
) -> Result<SparseSolution> {
    let started = Instant::now();
    let n = phi.ncols();
    cfg.validate(name, n, FIELDS)?;
    check_dims(phi, y)?;
    let lambda = cfg.lambda.expect("validated");
    let y = y.as_slice();

    let lip = phi.spectral_norm_sq() * LIPSCHITZ_SLACK;
    if lip == 0.0 {
        return Ok(SparseSolution::zero(n, norm2(y), started));
    }
    let step = 1.0 / lip;
    let shrink = lambda * step;

    let mut x = vec![0.0; n];
    // Extrapolated point and its image; for ISTA these track x itself.
    let mut z = x.clone();
    let mut phi_z = vec![0.0; y.len()];
    let mut phi_x = phi_z.clone();
    let mut t = 1.0f64;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        let grad = phi.correlate(&sub(&phi_z, y));
        let next: Vec<f64> = z
            .iter()
            .zip(&grad)
            .map(|(zi, gi)| soft_threshold(zi - step * gi, shrink))
            .collect();
        let phi_next = phi.apply(&next);
        let res = sub(&phi_next, y);
        let res_norm = norm2(&res);
        trace.push(0.5 * res_norm * res_norm + lambda * norm1(&next));

        // Measured from the point the prox step started at, so FISTA's
        // momentum cannot produce a small move away from a non-stationary x.
        let stalled = relative_change_small(&next, &z);
        if accelerated {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let beta = (t - 1.0) / t_next;
            z = next.iter().zip(&x).map(|(a, b)| a + beta * (a - b)).collect();
            phi_z = phi_next.iter().zip(&phi_x).map(|(a, b)| a + beta * (a - b)).collect();
            t = t_next;
        } else {
            z.clone_from(&next);
            phi_z.clone_from(&phi_next);
        }
        x = next;
        phi_x = phi_next;
        if stalled || res_norm <= cfg.tolerance {
            converged = true;
            break;
        }
    }
    let mut sol = SparseSolution::finish(phi, y, x, iterations, converged, started);
    sol.objective_trace = trace;
    sol.into_result()
}
