use crate::error::Result;

use super::{least_squares_min_norm, Matrix, Support};

/// Linear operator view of a dictionary, as consumed by the solvers.
///
/// Implemented by dense [`Matrix`] and by sparse bases that only need
/// `O(nnz)` work per sweep.
pub trait Dictionary: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `Φ·x`.
    fn apply(&self, x: &[f64]) -> Vec<f64>;

    /// `Φᵀ·r`, the correlation of `r` with every atom.
    fn correlate(&self, r: &[f64]) -> Vec<f64>;

    /// Least-squares coefficients over the columns in `support`, in support
    /// order, with the numerical rank of the restricted system.
    fn restricted_least_squares(&self, y: &[f64], support: &Support) -> Result<(Vec<f64>, usize)>;

    /// Largest eigenvalue of `ΦᵀΦ`.
    fn spectral_norm_sq(&self) -> f64;
}

impl Dictionary for Matrix {
    fn nrows(&self) -> usize {
        self.rows()
    }

    fn ncols(&self) -> usize {
        self.cols()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.mul_vec(x)
    }

    fn correlate(&self, r: &[f64]) -> Vec<f64> {
        self.tr_mul_vec(r)
    }

    fn restricted_least_squares(&self, y: &[f64], support: &Support) -> Result<(Vec<f64>, usize)> {
        let sub = self.select_columns(support)?;
        let ls = least_squares_min_norm(&sub, y)?;
        Ok((ls.coefficients, ls.rank))
    }

    fn spectral_norm_sq(&self) -> f64 {
        Matrix::spectral_norm_sq(self)
    }
}
