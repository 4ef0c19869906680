use super::{dot, Matrix};

const JACOBI_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi: orthogonalize the columns of the `m×n`
/// column-major block `w` in place, accumulating rotations into `v` (`n×n`)
/// when given. On return `A·V = W` with mutually orthogonal columns, whose
/// norms are the singular values.
pub(crate) fn jacobi_orthogonalize(w: &mut [f64], m: usize, n: usize, mut v: Option<&mut [f64]>) {
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let cp = &w[p * m..(p + 1) * m];
                    let cq = &w[q * m..(q + 1) * m];
                    (dot(cp, cp), dot(cq, cq), dot(cp, cq))
                };
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(w, m, p, q, c, s);
                if let Some(v) = v.as_deref_mut() {
                    rotate(v, n, p, q, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate(buf: &mut [f64], len: usize, p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = buf.split_at_mut(q * len);
    let cp = &mut lo[p * len..(p + 1) * len];
    let cq = &mut hi[..len];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let t = *a;
        *a = c * t - s * *b;
        *b = s * t + c * *b;
    }
}

/// All `min(m, n)` singular values, descending.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let (m, n) = a.shape();
    let work = if m >= n { a.clone() } else { a.transpose() };
    let (rows, cols) = work.shape();
    let mut w = work.into_vec();
    jacobi_orthogonalize(&mut w, rows, cols, None);
    let mut s: Vec<f64> = w.chunks_exact(rows).map(|c| dot(c, c).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `(σ_min, σ_max)` over the `min(m, n)` singular values of `a`.
pub fn singular_extremes(a: &Matrix) -> (f64, f64) {
    let s = singular_values(a);
    match (s.last(), s.first()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    }
}
