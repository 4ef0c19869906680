//! Empirical restricted isometry constants.

use std::collections::HashSet;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::linalg::{singular_extremes, Matrix};
use crate::rng;

/// Largest support count enumerated exhaustively by [`estimate_rip`].
pub const EXHAUSTIVE_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipEstimate {
    pub k: usize,
    pub delta_hat: f64,
    /// Number of supports examined.
    pub trials: u64,
    /// All `C(N, k)` supports examined. When false, `delta_hat` is only a
    /// lower bound on the true constant.
    pub exhaustive: bool,
}

impl RipEstimate {
    pub fn is_lower_bound(&self) -> bool {
        !self.exhaustive
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exhaustive when `C(N, k) ≤ 10 000`, otherwise Monte Carlo over `trials`
/// distinct random supports.
pub fn estimate_rip(a: &Matrix, k: usize, trials: u64, seed: u64) -> Result<RipEstimate> {
    check_order(a, k)?;
    if binomial(a.cols(), k) <= EXHAUSTIVE_LIMIT {
        estimate_rip_exhaustive(a, k)
    } else {
        estimate_rip_monte_carlo(a, k, trials, seed)
    }
}

fn check_order(a: &Matrix, k: usize) -> Result<()> {
    if k == 0 || k > a.rows().min(a.cols()) {
        return Err(Error::domain(format!(
            "RIP order must be in 1..={}, got {k}",
            a.rows().min(a.cols())
        )));
    }
    Ok(())
}

/// `max(σ_max² − 1, 1 − σ_min²)` of the submatrix on `support`.
pub fn support_deviation(a: &Matrix, support: &[usize]) -> f64 {
    let (lo, hi) = singular_extremes(&a.select_columns_unchecked(support));
    (hi * hi - 1.0).max(1.0 - lo * lo).max(0.0)
}

pub fn estimate_rip_exhaustive(a: &Matrix, k: usize) -> Result<RipEstimate> {
    check_order(a, k)?;
    let n = a.cols();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut delta = 0.0f64;
    let mut count = 0u64;
    loop {
        delta = delta.max(support_deviation(a, &idx));
        count += 1;
        // Next combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(RipEstimate {
        k,
        delta_hat: delta,
        trials: count,
        exhaustive: true,
    })
}

/// Monte Carlo over distinct supports drawn without replacement from the
/// support space (capped at `C(N, k)`, in which case every support is seen).
pub fn estimate_rip_monte_carlo(a: &Matrix, k: usize, trials: u64, seed: u64) -> Result<RipEstimate> {
    check_order(a, k)?;
    if trials == 0 {
        return Err(Error::domain("Monte Carlo RIP needs at least one trial"));
    }
    let total = binomial(a.cols(), k);
    let target = trials.min(total);
    let mut rng = rng::seeded(seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut delta = 0.0f64;
    while (seen.len() as u64) < target {
        let mut s = sample(&mut rng, a.cols(), k).into_vec();
        s.sort_unstable();
        if seen.contains(&s) {
            continue;
        }
        delta = delta.max(support_deviation(a, &s));
        seen.insert(s);
    }
    Ok(RipEstimate {
        k,
        delta_hat: delta,
        trials: target,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 2), 45);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(10_000, 5000), u64::MAX);
    }

    #[test]
    fn orthonormal_is_exact_isometry() {
        let est = estimate_rip(&Matrix::identity(5), 3, 10, 0).unwrap();
        assert!(est.exhaustive);
        assert_eq!(est.trials, 10);
        assert!(est.delta_hat < 1e-12);
    }

    #[test]
    fn duplicate_column_breaks_isometry() {
        let a = Matrix::from_col_major(2, 3, vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(estimate_rip(&a, 2, 10, 0).unwrap().delta_hat >= 1.0 - 1e-12);
    }

    #[test]
    fn rejects_bad_order() {
        let a = Matrix::identity(3);
        assert!(estimate_rip(&a, 0, 1, 0).is_err());
        assert!(estimate_rip(&a, 4, 1, 0).is_err());
    }
}
