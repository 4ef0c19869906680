//! Scalar shrinkage operators.

use crate::error::{Error, Result};

pub fn soft_threshold(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// Keep `v` when `|v| > t`, else zero.
pub fn hard_threshold(v: f64, t: f64) -> f64 {
    if v.abs() > t {
        v
    } else {
        0.0
    }
}

/// Generalized soft-thresholding threshold for the scalar problem
/// `min_x ½(v − x)² + λ|x|^p`, `0 ≤ p < 1`:
///
/// `τ = (2λ(1−p))^{1/(2−p)} + λp(2λ(1−p))^{(p−1)/(2−p)}`.
///
/// `p = 1` is rejected; the soft threshold `τ = λ` is its limit.
pub fn gst_threshold(lambda: f64, p: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("GST needs lambda > 0, got {lambda}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("GST threshold needs 0 <= p < 1, got {p}")));
    }
    let base = 2.0 * lambda * (1.0 - p);
    let first = base.powf(1.0 / (2.0 - p));
    let second = if p == 0.0 {
        0.0
    } else {
        lambda * p * base.powf((p - 1.0) / (2.0 - p))
    };
    Ok(first + second)
}

const GST_INNER_ITERS: usize = 50;

/// Generalized shrinkage: the minimizer of `½(v − x)² + λ|x|^p` for
/// `p ∈ [0, 1]`. Hard thresholding at `√(2λ)` for `p = 0`, soft thresholding
/// at `λ` for `p = 1`.
pub fn gst_shrink(v: f64, lambda: f64, p: f64) -> f64 {
    if lambda <= 0.0 {
        return v;
    }
    if p >= 1.0 {
        return soft_threshold(v, lambda);
    }
    let tau = gst_threshold(lambda, p).expect("validated domain");
    let a = v.abs();
    if a <= tau {
        return 0.0;
    }
    if p == 0.0 {
        return v;
    }
    // Fixed point of x = |v| − λp·x^{p−1}, a contraction above τ.
    let mut x = a;
    for _ in 0..GST_INNER_ITERS {
        let next = a - lambda * p * x.powf(p - 1.0);
        if (next - x).abs() <= 1e-15 * x {
            x = next;
            break;
        }
        x = next;
    }
    v.signum() * x
}
