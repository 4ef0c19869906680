use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::{dot, norm2, Support, Vector};

/// Dense, column-major matrix of finite reals.
///
/// Columns are contiguous, which is the access pattern every dictionary
/// algorithm in this crate uses (atom correlation, column selection).
/// Values are immutable after construction; the spectral norm is computed
/// lazily and cached.
#[derive(Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    spectral_sq: OnceLock<f64>,
}

impl Clone for Matrix {
    fn clone(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
            spectral_sq: self.spectral_sq.clone(),
        }
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Matrix {
    /// Build from column-major data. `rows` must be positive; a matrix may
    /// have zero columns (an empty sample set).
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::DimensionMismatch("matrix needs at least one row".into()));
        }
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix from {} values",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self::from_parts(rows, cols, data))
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self {
            rows,
            cols,
            data,
            spectral_sq: OnceLock::new(),
        }
    }

    /// Build from row slices; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        let mut data = vec![0.0; m * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                data[j * m + i] = v;
            }
        }
        Self::from_col_major(m, n, data)
    }

    pub fn from_columns(rows: usize, columns: &[&[f64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            data.extend_from_slice(c);
        }
        Self::from_col_major(rows, columns.len(), data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0, "matrix needs at least one row");
        Self::from_parts(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.rows)
    }

    pub fn column_vector(&self, j: usize) -> Vector {
        Vector::from_parts(self.column(j).to_vec())
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.columns().map(norm2).collect()
    }

    /// `A·x`, skipping zero coefficients.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "mul_vec dimension");
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                axpy(xj, self.column(j), &mut out);
            }
        }
        out
    }

    /// `Aᵀ·r`.
    pub fn tr_mul_vec(&self, r: &[f64]) -> Vec<f64> {
        assert_eq!(r.len(), self.rows, "tr_mul_vec dimension");
        self.columns().map(|c| dot(c, r)).collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for col in other.columns() {
            data.extend(self.mul_vec(col));
        }
        Ok(Self::from_parts(self.rows, other.cols, data))
    }

    /// `AᵀA`, exploiting symmetry.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut data = vec![0.0; n * n];
        for j in 0..n {
            let cj = self.column(j);
            for i in 0..=j {
                let v = dot(self.column(i), cj);
                data[j * n + i] = v;
                data[i * n + j] = v;
            }
        }
        Self::from_parts(n.max(1), n, if n == 0 { Vec::new() } else { data })
    }

    pub fn transpose(&self) -> Matrix {
        let (m, n) = self.shape();
        let mut data = vec![0.0; m * n];
        for j in 0..n {
            for i in 0..m {
                data[i * n + j] = self.data[j * m + i];
            }
        }
        Self::from_parts(n, m, data)
    }

    pub fn select_columns(&self, support: &Support) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.rows * support.len());
        for &j in support.indices() {
            if j >= self.cols {
                return Err(Error::SupportOutOfRange {
                    index: j,
                    cols: self.cols,
                });
            }
            data.extend_from_slice(self.column(j));
        }
        Ok(Self::from_parts(self.rows, support.len(), data))
    }

    pub(crate) fn select_columns_unchecked(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.column(j));
        }
        Self::from_parts(self.rows, idx.len(), data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.rows, self.cols, data))
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Self::from_parts(self.rows, self.cols, self.data.iter().map(|v| v * s).collect())
    }

    /// Largest eigenvalue of `AᵀA` (squared spectral norm), by power
    /// iteration; cached after the first call.
    pub fn spectral_norm_sq(&self) -> f64 {
        *self.spectral_sq.get_or_init(|| super::power::spectral_norm_sq(self))
    }
}

#[inline]
pub(crate) fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Rescale every column to unit Euclidean norm.
pub fn normalize_columns(a: &Matrix) -> Result<Matrix> {
    let mut data = a.data.clone();
    for (j, col) in data.chunks_exact_mut(a.rows).enumerate() {
        let n = norm2(col);
        if n < 1e-14 {
            return Err(Error::ZeroColumn(j));
        }
        // Columns that are already unit-norm are left untouched.
        if (n - 1.0).abs() > 4.0 * f64::EPSILON {
            for v in col.iter_mut() {
                *v /= n;
            }
        }
    }
    Ok(Matrix::from_parts(a.rows, a.cols, data))
}
