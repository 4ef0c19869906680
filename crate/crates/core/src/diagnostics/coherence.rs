use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Largest absolute inner product between distinct columns. Columns are
/// assumed unit-norm.
pub fn mutual_coherence(a: &Matrix) -> Result<f64> {
    let n = a.cols();
    if n < 2 {
        return Err(Error::SingleColumn);
    }
    let mut best = 0.0f64;
    for i in 0..n {
        let ci = a.column(i);
        for j in i + 1..n {
            best = best.max(dot(ci, a.column(j)).abs());
        }
    }
    Ok(best)
}

/// Lower bound `√((N−m)/(m(N−1)))` on the coherence of any `m×N` frame.
pub fn welch_bound(m: usize, n: usize) -> Result<f64> {
    if m == 0 || n < m || n < 2 {
        return Err(Error::domain(format!(
            "welch bound needs N ≥ m ≥ 1 and N ≥ 2, got m={m}, N={n}"
        )));
    }
    let (m, n) = (m as f64, n as f64);
    Ok(((n - m) / (m * (n - 1.0))).sqrt())
}
