//! Sample-count and recovery-error bounds.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{norm1, norm2, sub};

/// Relative distance to an integer below which `ceil` snaps to it, so that
/// rounding noise in an exact integer bound does not add one.
const CEIL_SNAP: f64 = 1e-12;

fn robust_ceil(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= CEIL_SNAP * r.abs().max(1.0) {
        r
    } else {
        v.ceil()
    }
}

/// `⌈(ln(|U||V|) + ln(2/β)) / (cα²)⌉`.
pub fn stable_embedding_samples(card_u: u64, card_v: u64, alpha: f64, beta: f64, c: f64) -> Result<u64> {
    if card_u == 0 || card_v == 0 {
        return Err(Error::domain("set cardinalities must be positive"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must be in (0, 1), got {beta}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    let logs = (card_u as f64).ln() + (card_v as f64).ln() + (2.0 / beta).ln();
    Ok(robust_ceil(logs / (c * alpha * alpha)) as u64)
}

/// Constants `(C0, C1)` of the ℓ1 recovery error bound, defined for
/// `0 ≤ δ < √2 − 1`.
pub fn error_bound_constants(delta: f64) -> Result<(f64, f64)> {
    let denom = 1.0 - (1.0 + SQRT_2) * delta;
    if delta.is_nan() || delta < 0.0 || denom <= 0.0 {
        return Err(Error::domain(format!(
            "isometry constant must be in [0, √2−1), got {delta}"
        )));
    }
    let c0 = 4.0 * (1.0 + delta).sqrt() / denom;
    let c1 = 2.0 * (1.0 - (1.0 - SQRT_2) * delta) / denom;
    Ok((c0, c1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryBoundReport {
    /// `‖x̂ − x‖₂`.
    pub lhs: f64,
    /// `C0·ε + C1·‖x − x_K‖₁/√K`.
    pub rhs: f64,
    /// `‖x − x_K‖₁/√K`.
    pub tail_term: f64,
    pub c0: f64,
    pub c1: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub holds: bool,
}

/// Comparisons allow `1e-9·(1 + ‖x‖₂)` of floating-point slack.
pub fn verify_recovery_bound(
    x_hat: &[f64],
    x_true: &[f64],
    k: usize,
    epsilon: f64,
    delta: f64,
) -> Result<RecoveryBoundReport> {
    let (c0, c1) = error_bound_constants(delta)?;
    if x_hat.len() != x_true.len() {
        return Err(Error::DimensionMismatch(format!(
            "estimate has length {}, truth has length {}",
            x_hat.len(),
            x_true.len()
        )));
    }
    if k == 0 {
        return Err(Error::domain("sparsity must be positive"));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::domain(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    let lhs = norm2(&sub(x_hat, x_true));
    let tail_term = norm1(&tail(x_true, k)) / (k as f64).sqrt();
    let rhs = c0 * epsilon + c1 * tail_term;
    let tol = 1e-9 * (1.0 + norm2(x_true));
    Ok(RecoveryBoundReport {
        lhs,
        rhs,
        tail_term,
        c0,
        c1,
        slack: rhs - lhs,
        holds: lhs <= rhs + tol,
    })
}

/// `x − x_K`: the entries outside the `k` largest magnitudes.
fn tail(x: &[f64], k: usize) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    let mut t = x.to_vec();
    for &j in order.iter().take(k) {
        t[j] = 0.0;
    }
    t
}
