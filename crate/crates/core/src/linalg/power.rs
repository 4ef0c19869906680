use super::{dot, norm2, Matrix};

const POWER_STEPS: usize = 100;
const POWER_TOL: f64 = 1e-8;

/// Largest eigenvalue of `AᵀA` by power iteration (100 steps, relative
/// tolerance 1e-8 on the Rayleigh quotient). Deterministic start vector.
pub fn spectral_norm_sq(a: &Matrix) -> f64 {
    let n = a.cols();
    if n == 0 {
        return 0.0;
    }
    // Fixed, non-degenerate start vector.
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            1.0 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut mu = 0.0;
    for _ in 0..POWER_STEPS {
        let w = a.tr_mul_vec(&a.mul_vec(&v));
        let next = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / nw).collect();
        let done = (next - mu).abs() <= POWER_TOL * next.abs();
        mu = next;
        if done {
            break;
        }
    }
    mu
}
