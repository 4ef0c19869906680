//! Independent ℓ1-minimization oracles for `min ‖x‖₁ s.t. Φx = y`.
//!
//! `l1_min_simplex` runs a dense two-phase simplex (Bland's rule) on the
//! split form `x = u − v`, `u, v ≥ 0`. `l1_min_bases` enumerates every
//! square basis; the optimum of the LP sits at one of them.

#![allow(dead_code)]

use tssr_core::linalg::least_squares_min_norm;
use tssr_core::Matrix;

const EPS: f64 = 1e-11;

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in &mut self.rows[r] {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) {
        loop {
            let entering = (0..self.width).filter(|&j| allowed(j)).find(|&j| {
                let z: f64 = (0..self.rows.len())
                    .map(|i| cost[self.basis[i]] * self.rows[i][j])
                    .sum();
                cost[j] - z < -EPS
            });
            let Some(c) = entering else { return };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - EPS || ((ratio - br).abs() <= EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let (r, _) = best.expect("LP unbounded");
            self.pivot(r, c);
        }
    }
}

/// `min cᵀx s.t. Ax = b, x ≥ 0` for a feasible bounded problem.
pub fn simplex(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Vec<f64> {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let rows = (0..m)
        .map(|i| {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row: Vec<f64> = a[i].iter().map(|v| sign * v).collect();
            row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
            row.push(sign * b[i]);
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };
    let phase1: Vec<f64> = (0..width).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    t.optimize(&phase1, &|_| true);
    let infeasibility: f64 = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs(i)).sum();
    assert!(infeasibility < 1e-9, "LP infeasible ({infeasibility})");
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[i][j].abs() > EPS) {
                t.pivot(i, j);
            }
        }
    }
    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, m));
    t.optimize(&phase2, &|j| j < n);
    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i);
        }
    }
    x
}

pub fn l1_min_simplex(phi: &Matrix, y: &[f64]) -> Vec<f64> {
    let (m, n) = phi.shape();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| phi.get(i, j)).collect();
            row.extend((0..n).map(|j| -phi.get(i, j)));
            row
        })
        .collect();
    let uv = simplex(&a, y, &vec![1.0; 2 * n]);
    (0..n).map(|j| uv[j] - uv[n + j]).collect()
}

/// Smallest `‖x‖₁` over solutions supported on an invertible `m`-column
/// basis.
pub fn l1_min_bases(phi: &Matrix, y: &[f64]) -> Vec<f64> {
    let (m, n) = phi.shape();
    let mut idx: Vec<usize> = (0..m).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let sub = Matrix::from_columns(m, &idx.iter().map(|&j| phi.column(j)).collect::<Vec<_>>()).unwrap();
        let ls = least_squares_min_norm(&sub, y).unwrap();
        if ls.rank == m {
            let l1: f64 = ls.coefficients.iter().map(|v| v.abs()).sum();
            if best.as_ref().is_none_or(|(b, _)| l1 < *b) {
                let mut x = vec![0.0; n];
                for (&j, &v) in idx.iter().zip(&ls.coefficients) {
                    x[j] = v;
                }
                best = Some((l1, x));
            }
        }
        let Some(i) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
    best.expect("no invertible basis").1
}
