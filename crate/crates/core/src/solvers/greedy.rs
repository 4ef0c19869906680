//! Greedy pursuit: OMP and CoSaMP.

use std::cmp::Ordering;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{norm2, sub, Dictionary, Support, Vector};

use super::config::{check_dims, relative_change_small, Fields, Use};
use super::{SolveConfig, SparseSolution};

/// Atoms with correlation below this are treated as orthogonal to the residual.
pub const NO_PROGRESS_CORRELATION: f64 = 1e-14;

/// Descending by magnitude, ascending by index on ties.
fn by_magnitude(values: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b))
}

/// Indices of the `count` largest-magnitude nonzero entries among
/// `candidates`, lowest index winning ties.
pub(crate) fn largest_entries(values: &[f64], mut candidates: Vec<usize>, count: usize) -> Vec<usize> {
    candidates.retain(|&j| values[j] != 0.0);
    if candidates.len() > count && count > 0 {
        candidates.select_nth_unstable_by(count - 1, by_magnitude(values));
    }
    candidates.truncate(count);
    candidates
}

/// Orthogonal matching pursuit: add the atom most correlated with the
/// residual, re-fit by least squares on the support, repeat until `K`
/// atoms are selected or the residual drops to the tolerance.
pub fn omp<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    let started = Instant::now();
    let (m, n) = (phi.nrows(), phi.ncols());
    cfg.validate(
        "omp",
        n,
        Fields {
            sparsity_k: Use::Optional,
            lambda: Use::Forbidden,
            alpha: Use::Forbidden,
            p_norm: Use::Forbidden,
        },
    )?;
    check_dims(phi, y)?;
    let k = cfg.sparsity_k.unwrap_or(m.min(n)).min(m.min(n));

    let y = y.as_slice();
    let y_norm = norm2(y);
    if y_norm <= cfg.tolerance {
        return Ok(SparseSolution::zero(n, y_norm, started));
    }

    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut x = vec![0.0; n];
    let mut residual = y.to_vec();
    let mut res_norm = y_norm;
    let mut iterations = 0;

    while support.len() < k && res_norm > cfg.tolerance {
        if iterations == cfg.max_iterations {
            return SparseSolution::finish(phi, y, x, iterations, false, started).into_result();
        }
        let corr = phi.correlate(&residual);
        let mut best: Option<(usize, f64)> = None;
        for (j, c) in corr.iter().enumerate() {
            let a = c.abs();
            if best.is_none_or(|(_, b)| a > b) && !support.contains(&j) {
                best = Some((j, a));
            }
        }
        let Some((j, corr_mag)) = best else { break };
        if corr_mag < NO_PROGRESS_CORRELATION {
            return Err(Error::NoProgress { correlation: corr_mag });
        }
        support.push(j);
        support.sort_unstable();
        let s = Support::from_unsorted(support.clone());
        let (coef, rank) = phi.restricted_least_squares(y, &s)?;
        if rank < s.len() {
            return Err(Error::RankDeficient { rank, needed: s.len() });
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        for (&i, &c) in s.indices().iter().zip(&coef) {
            x[i] = c;
        }
        residual = sub(y, &phi.apply(&x));
        res_norm = norm2(&residual);
        iterations += 1;
    }
    Ok(SparseSolution::finish(phi, y, x, iterations, true, started))
}

/// Compressive sampling matching pursuit.
///
/// Each iteration merges the `2K` atoms most correlated with the residual
/// into the current support, fits by least squares on the merged set and
/// prunes back to the `K` largest coefficients. Halts when the residual
/// reaches the tolerance, the iterate stops changing, or the residual stops
/// decreasing (the best iterate is returned).
pub fn cosamp<D: Dictionary + ?Sized>(phi: &D, y: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
    let started = Instant::now();
    let (m, n) = (phi.nrows(), phi.ncols());
    cfg.validate(
        "cosamp",
        n,
        Fields {
            sparsity_k: Use::Required,
            lambda: Use::Forbidden,
            alpha: Use::Forbidden,
            p_norm: Use::Forbidden,
        },
    )?;
    check_dims(phi, y)?;
    let k = cfg.sparsity_k.expect("validated").min(m);

    let y = y.as_slice();
    let y_norm = norm2(y);
    if y_norm <= cfg.tolerance {
        return Ok(SparseSolution::zero(n, y_norm, started));
    }

    let mut x = vec![0.0; n];
    let mut support: Vec<usize> = Vec::new();
    let mut residual = y.to_vec();
    let mut res_norm = y_norm;

    for iteration in 1..=cfg.max_iterations {
        let proxy = phi.correlate(&residual);
        // Keep the merged set solvable: at most m columns.
        let budget = (2 * k).min(m.saturating_sub(support.len()));
        let fresh: Vec<usize> = (0..n).filter(|j| !support.contains(j)).collect();
        let mut merged = largest_entries(&proxy, fresh, budget);
        merged.extend_from_slice(&support);
        let merged = Support::from_unsorted(merged);

        let (coef, rank) = phi.restricted_least_squares(y, &merged)?;
        if rank < merged.len() {
            return Err(Error::RankDeficient {
                rank,
                needed: merged.len(),
            });
        }
        let mut b = vec![0.0; n];
        for (&j, &c) in merged.indices().iter().zip(&coef) {
            b[j] = c;
        }
        let kept = largest_entries(&b, merged.indices().to_vec(), k);
        let mut next = vec![0.0; n];
        for &j in &kept {
            next[j] = b[j];
        }
        let next_residual = sub(y, &phi.apply(&next));
        let next_norm = norm2(&next_residual);

        if next_norm >= res_norm && iteration > 1 {
            // Residual stopped decreasing: keep the previous iterate.
            return Ok(SparseSolution::finish(phi, y, x, iteration - 1, true, started));
        }
        let stalled = relative_change_small(&next, &x);
        x = next;
        support = kept;
        support.sort_unstable();
        residual = next_residual;
        res_norm = next_norm;
        if res_norm <= cfg.tolerance || stalled {
            return Ok(SparseSolution::finish(phi, y, x, iteration, true, started));
        }
    }
    SparseSolution::finish(phi, y, x, cfg.max_iterations, false, started).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn largest_entries_ties_lowest_index() {
        let v = [1.0, -3.0, 3.0, 0.0, 2.0];
        assert_eq!(
            Support::from_unsorted(largest_entries(&v, (0..5).collect(), 2)).indices(),
            &[1, 2]
        );
        let mut top = largest_entries(&[2.0, 2.0, 2.0], vec![0, 1, 2], 2);
        top.sort_unstable();
        assert_eq!(top, vec![0, 1]);
        // Zero entries are never selected.
        assert_eq!(largest_entries(&[0.0, 1.0, 0.0], vec![0, 1, 2], 3), vec![1]);
    }

    #[test]
    fn omp_identity_dictionary() {
        let phi = Matrix::identity(8);
        let y = Vector::new(vec![0.0, 2.0, 0.0, 0.0, -1.0, 0.0, 0.5, 0.0]).unwrap();
        let sol = omp(&phi, &y, &SolveConfig::new(10, 1e-12).with_sparsity(3)).unwrap();
        assert_eq!(sol.x, y);
        assert_eq!(sol.support.indices(), &[1, 4, 6]);
        assert_eq!(sol.iterations, 3);
    }

    #[test]
    fn omp_zero_signal() {
        let phi = Matrix::identity(4);
        let sol = omp(&phi, &Vector::zeros(4), &SolveConfig::new(10, 1e-12).with_sparsity(2)).unwrap();
        assert_eq!(sol.iterations, 0);
        assert!(sol.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn omp_rejects_unused_fields() {
        let phi = Matrix::identity(4);
        let cfg = SolveConfig::new(10, 1e-6).with_lambda(0.1);
        assert!(matches!(
            omp(&phi, &Vector::zeros(4), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn omp_no_progress_on_orthogonal_signal() {
        // Signal orthogonal to every atom.
        let phi = Matrix::from_col_major(3, 2, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let y = Vector::new(vec![0.0, 0.0, 1.0]).unwrap();
        let r = omp(&phi, &y, &SolveConfig::new(10, 1e-9).with_sparsity(2));
        assert!(matches!(r, Err(Error::NoProgress { .. })));
    }

    #[test]
    fn cosamp_identity_one_iteration() {
        let phi = Matrix::identity(10);
        let mut y = vec![0.0; 10];
        y[2] = 1.0;
        y[5] = -0.4;
        y[9] = 2.5;
        let y = Vector::new(y).unwrap();
        let sol = cosamp(&phi, &y, &SolveConfig::new(20, 1e-12).with_sparsity(3)).unwrap();
        assert_eq!(sol.x, y);
        assert_eq!(sol.iterations, 1);
    }

    #[test]
    fn cosamp_zero_signal_and_missing_k() {
        let phi = Matrix::identity(4);
        let sol = cosamp(&phi, &Vector::zeros(4), &SolveConfig::new(5, 1e-9).with_sparsity(2)).unwrap();
        assert!(sol.x.iter().all(|&v| v == 0.0));
        assert!(cosamp(&phi, &Vector::zeros(4), &SolveConfig::new(5, 1e-9)).is_err());
    }

    #[test]
    fn cosamp_duplicate_atoms_rank_deficient() {
        let phi = Matrix::from_col_major(2, 3, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let y = Vector::new(vec![1.0, 0.5]).unwrap();
        let r = cosamp(&phi, &y, &SolveConfig::new(5, 1e-12).with_sparsity(1));
        assert!(matches!(r, Err(Error::RankDeficient { .. })));
    }
}
