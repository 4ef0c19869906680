use crate::error::{Error, Result};

use super::svd::jacobi_orthogonalize;
use super::{dot, Matrix, Support, Vector};

/// Numerical rank threshold, relative to the largest singular value.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Solution of `min ‖y − A·v‖₂` for a (restricted) matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// One coefficient per column of `A`; the minimum-norm minimizer.
    pub coefficients: Vec<f64>,
    pub rank: usize,
}

impl LeastSquares {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.coefficients.len()
    }
}

/// Minimum-norm least squares on all columns of `a`.
///
/// Uses Householder QR with column pivoting; when the pivoted diagonal
/// reveals a rank deficiency the pseudo-inverse solution is computed from a
/// Jacobi SVD instead.
pub fn least_squares_min_norm(a: &Matrix, y: &[f64]) -> Result<LeastSquares> {
    let (m, n) = a.shape();
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix has {m} rows",
            y.len()
        )));
    }
    if n == 0 {
        return Ok(LeastSquares {
            coefficients: Vec::new(),
            rank: 0,
        });
    }
    if let Some(coefficients) = pivoted_qr_solve(a.as_slice(), y, m, n) {
        return Ok(LeastSquares { coefficients, rank: n });
    }
    Ok(pinv_solve(a.as_slice(), y, m, n))
}

/// Least squares restricted to the columns in `support`, embedded back into a
/// length-`N` vector that is zero off the support.
///
/// Fails with [`Error::RankDeficient`] when `A_S` has numerical rank below
/// `|S|`; use [`least_squares_min_norm`] to get the pseudo-inverse solution
/// in that case.
pub fn least_squares_on_support(a: &Matrix, y: &Vector, support: &Support) -> Result<Vector> {
    let sub = a.select_columns(support)?;
    let ls = least_squares_min_norm(&sub, y)?;
    if !ls.is_full_rank() {
        return Err(Error::RankDeficient {
            rank: ls.rank,
            needed: support.len(),
        });
    }
    let mut x = vec![0.0; a.cols()];
    for (&j, &c) in support.indices().iter().zip(&ls.coefficients) {
        x[j] = c;
    }
    Ok(Vector::from_parts(x))
}

/// Full-rank solve by pivoted QR; `None` when the rank test fails.
fn pivoted_qr_solve(a: &[f64], y: &[f64], m: usize, n: usize) -> Option<Vec<f64>> {
    if n > m {
        return None;
    }
    let mut w = a.to_vec();
    let mut b = y.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut diag = vec![0.0; n];
    let mut r00 = 0.0;

    for k in 0..n {
        // Pivot: largest remaining column norm, first index on ties.
        let mut best = k;
        let mut best_sq = -1.0;
        for j in k..n {
            let c = &w[j * m + k..(j + 1) * m];
            let sq = dot(c, c);
            if sq > best_sq {
                best_sq = sq;
                best = j;
            }
        }
        let pivot_norm = best_sq.sqrt();
        if k == 0 {
            r00 = pivot_norm;
        }
        if pivot_norm == 0.0 || pivot_norm <= RANK_TOLERANCE * r00 {
            return None;
        }
        if best != k {
            let (lo, hi) = w.split_at_mut(best * m);
            lo[k * m..(k + 1) * m].swap_with_slice(&mut hi[..m]);
            perm.swap(k, best);
        }

        // Householder reflector for w[k.., k].
        let col = &mut w[k * m + k..(k + 1) * m];
        let alpha = if col[0] >= 0.0 { -pivot_norm } else { pivot_norm };
        col[0] -= alpha;
        let vnorm_sq = dot(col, col);
        diag[k] = alpha;
        if vnorm_sq == 0.0 {
            continue;
        }
        let v: Vec<f64> = col.to_vec();
        for j in k + 1..n {
            let c = &mut w[j * m + k..(j + 1) * m];
            let f = 2.0 * dot(&v, c) / vnorm_sq;
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
        let bk = &mut b[k..];
        let f = 2.0 * dot(&v, bk) / vnorm_sq;
        for (bi, vi) in bk.iter_mut().zip(&v) {
            *bi -= f * vi;
        }
    }

    // Back substitution on R (strict upper part lives in w, diagonal in diag).
    let mut z = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= w[j * m + k] * z[j];
        }
        z[k] = s / diag[k];
    }
    let mut x = vec![0.0; n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = z[k];
    }
    Some(x)
}

fn pinv_solve(a: &[f64], y: &[f64], m: usize, n: usize) -> LeastSquares {
    let mut w = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    jacobi_orthogonalize(&mut w, m, n, Some(&mut v));
    let sig_sq: Vec<f64> = w.chunks_exact(m).map(|c| dot(c, c)).collect();
    let smax = sig_sq.iter().fold(0.0f64, |a, &b| a.max(b)).sqrt();
    let cutoff = RANK_TOLERANCE * smax;
    let mut x = vec![0.0; n];
    let mut rank = 0;
    for (i, &s2) in sig_sq.iter().enumerate() {
        if s2.sqrt() <= cutoff || s2 == 0.0 {
            continue;
        }
        rank += 1;
        let coef = dot(&w[i * m..(i + 1) * m], y) / s2;
        for (xj, vj) in x.iter_mut().zip(&v[i * n..(i + 1) * n]) {
            *xj += coef * vj;
        }
    }
    LeastSquares { coefficients: x, rank }
}
