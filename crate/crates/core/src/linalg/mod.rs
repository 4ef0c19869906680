//! Dense linear algebra kernels shared by every solver: column-major
//! matrices, supports, restricted least squares and singular values.

mod dictionary;
mod lstsq;
mod matrix;
mod power;
mod svd;

use std::ops::Deref;

pub use dictionary::Dictionary;
pub use lstsq::{least_squares_min_norm, least_squares_on_support, LeastSquares, RANK_TOLERANCE};
pub(crate) use matrix::axpy;
pub use matrix::{normalize_columns, Matrix};
pub use power::spectral_norm_sq;
pub use svd::{singular_extremes, singular_values};

use crate::error::{Error, Result};

/// Finite real vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(data))
    }

    pub(crate) fn from_parts(data: Vec<f64>) -> Self {
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self(data)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.0)
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Support {
        Support(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, _)| i)
                .collect(),
        )
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

/// Strictly increasing set of column indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Support(Vec<usize>);

impl Support {
    /// Validate a strictly increasing index list bounded by `cols`.
    pub fn new(indices: Vec<usize>, cols: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= cols) {
            return Err(Error::SupportOutOfRange { index: bad, cols });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DimensionMismatch(
                "support indices must be strictly increasing".into(),
            ));
        }
        Ok(Self(indices))
    }

    /// Sort and deduplicate arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    // Four accumulators let the compiler vectorize the reduction.
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `‖y − A·x‖₂`.
pub fn residual_norm<D: Dictionary + ?Sized>(a: &D, y: &[f64], x: &[f64]) -> f64 {
    norm2(&sub(y, &a.apply(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_validation() {
        assert!(Support::new(vec![0, 2, 5], 6).is_ok());
        assert!(Support::new(vec![0, 2, 2], 6).is_err());
        assert!(Support::new(vec![3, 1], 6).is_err());
        assert!(matches!(
            Support::new(vec![6], 6),
            Err(Error::SupportOutOfRange { index: 6, cols: 6 })
        ));
        assert_eq!(Support::from_unsorted(vec![4, 1, 4]).indices(), &[1, 4]);
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..11).map(|i| i as f64 * 0.5).collect();
        let b: Vec<f64> = (0..11).map(|i| 1.0 - i as f64).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }

    #[test]
    fn vector_rejects_nan() {
        assert!(matches!(
            Vector::new(vec![0.0, f64::INFINITY]),
            Err(Error::NonFinite(1))
        ));
        assert_eq!(
            Vector::new(vec![0.0, 2.0, 0.0, -1.0]).unwrap().support().indices(),
            &[1, 3]
        );
    }
}
