//! Compressed sparse column storage for the second-stage basis.

use std::sync::OnceLock;

use crate::error::Result;
use crate::linalg::{least_squares_min_norm, Dictionary, Matrix, Support};

/// Column-compressed matrix. Only exact nonzeros are stored, so products
/// cost `O(nnz)` rather than `O(rows·cols)`.
#[derive(Debug, Clone)]
pub struct SparseBasis {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    spectral_sq: OnceLock<f64>,
}

impl SparseBasis {
    pub fn from_dense(a: &Matrix) -> Self {
        let mut col_ptr = Vec::with_capacity(a.cols() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for col in a.columns() {
            for (i, &v) in col.iter().enumerate() {
                if v != 0.0 {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Self {
            rows: a.rows(),
            cols: a.cols(),
            col_ptr,
            row_idx,
            values,
            spectral_sq: OnceLock::new(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and values of column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[r.clone()], &self.values[r])
    }

    pub fn to_dense(&self) -> Matrix {
        let mut data = vec![0.0; self.rows * self.cols];
        for j in 0..self.cols {
            let (rows, vals) = self.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                data[j * self.rows + i] = v;
            }
        }
        Matrix::from_parts(self.rows, self.cols, data)
    }
}

impl Dictionary for SparseBasis {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                let (rows, vals) = self.column(j);
                for (&i, &v) in rows.iter().zip(vals) {
                    out[i] += xj * v;
                }
            }
        }
        out
    }

    fn correlate(&self, r: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|j| {
                let (rows, vals) = self.column(j);
                rows.iter().zip(vals).map(|(&i, &v)| v * r[i]).sum()
            })
            .collect()
    }

    /// Only rows touched by the support enter the fit; the remaining rows
    /// contribute a constant to the residual.
    fn restricted_least_squares(&self, y: &[f64], support: &Support) -> Result<(Vec<f64>, usize)> {
        let mut touched: Vec<usize> = support
            .indices()
            .iter()
            .flat_map(|&j| self.column(j).0.iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        if touched.is_empty() {
            return Ok((vec![0.0; support.len()], 0));
        }
        let local = |i: usize| touched.binary_search(&i).expect("touched row");
        let r = touched.len();
        let mut data = vec![0.0; r * support.len()];
        for (c, &j) in support.indices().iter().enumerate() {
            let (rows, vals) = self.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                data[c * r + local(i)] = v;
            }
        }
        let sub = Matrix::from_parts(r, support.len(), data);
        let target: Vec<f64> = touched.iter().map(|&i| y[i]).collect();
        let ls = least_squares_min_norm(&sub, &target)?;
        Ok((ls.coefficients, ls.rank))
    }

    fn spectral_norm_sq(&self) -> f64 {
        *self.spectral_sq.get_or_init(|| power_iteration(self))
    }
}

fn power_iteration(a: &SparseBasis) -> f64 {
    if a.nnz() == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..a.cols).map(|j| 1.0 + (j % 7) as f64 * 0.1).collect();
    let mut est = 0.0;
    for _ in 0..100 {
        let norm = crate::linalg::norm2(&v);
        if norm == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let w = a.correlate(&a.apply(&v));
        let next = crate::linalg::dot(&v, &w);
        v = w;
        if (next - est).abs() <= 1e-8 * next.abs() {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Matrix {
        Matrix::from_rows(&[
            vec![1.0, 0.0, 0.2],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.5, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn products_match_dense() {
        let a = example();
        let s = SparseBasis::from_dense(&a);
        assert_eq!(s.nnz(), 5);
        assert_eq!(s.to_dense(), a);
        let x = [0.3, -1.0, 2.0];
        assert_eq!(s.apply(&x), a.mul_vec(&x));
        let r = [1.0, 2.0, -0.5, 4.0];
        for (p, q) in s.correlate(&r).iter().zip(a.tr_mul_vec(&r)) {
            assert!((p - q).abs() < 1e-15);
        }
        assert!((s.spectral_norm_sq() - a.spectral_norm_sq()).abs() < 1e-6);
    }

    #[test]
    fn least_squares_matches_dense() {
        let a = example();
        let s = SparseBasis::from_dense(&a);
        let y = [1.0, 0.5, -2.0, 3.0];
        let supp = Support::from_unsorted(vec![0, 2]);
        let (sparse, rank) = s.restricted_least_squares(&y, &supp).unwrap();
        let (dense, dense_rank) = a.restricted_least_squares(&y, &supp).unwrap();
        assert_eq!(rank, dense_rank);
        for (p, q) in sparse.iter().zip(&dense) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}
