//! Monte Carlo check of `Pr(|‖Φx‖² − ‖x‖²| ≥ α‖x‖²) ≤ 2e^{−cmα²}`.

use crate::dataio::{sensing_from, unit_sphere, Ensemble};
use crate::error::{Error, Result};
use crate::linalg::{norm2, Matrix};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub ensemble: Option<Ensemble>,
    pub alpha: f64,
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub violations: u64,
    pub empirical_tail: f64,
    /// `c* = −ln(tail/2)/(mα²)`, the constant at which the bound is tight;
    /// absent when no trial violated the band.
    pub fitted_c: Option<f64>,
}

impl ConcentrationReport {
    /// `2e^{−cmα²}`.
    pub fn bound_at(&self, c: f64) -> f64 {
        2.0 * (-c * self.m as f64 * self.alpha * self.alpha).exp()
    }

    fn new(ensemble: Option<Ensemble>, alpha: f64, m: usize, n: usize, trials: u64, violations: u64) -> Self {
        let tail = violations as f64 / trials as f64;
        let fitted_c = (violations > 0).then(|| -(tail / 2.0).ln() / (m as f64 * alpha * alpha));
        Self {
            ensemble,
            alpha,
            m,
            n,
            trials,
            violations,
            empirical_tail: tail,
            fitted_c,
        }
    }
}

fn check(alpha: f64, trials: u64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if trials == 0 {
        return Err(Error::domain("concentration check needs at least one trial"));
    }
    Ok(())
}

fn violates(phi: &Matrix, x: &[f64], alpha: f64) -> bool {
    let e = norm2(&phi.mul_vec(x)).powi(2);
    (e - 1.0).abs() >= alpha
}

/// Fresh `(Φ, x)` pair per trial, with trial `t` drawn from sub-stream `t`
/// of `seed`.
pub fn concentration_check(
    ensemble: Ensemble,
    m: usize,
    n: usize,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<ConcentrationReport> {
    check(alpha, trials)?;
    if n == 0 {
        return Err(Error::domain("signal dimension must be positive"));
    }
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = rng::substream(seed, t);
        let phi = sensing_from(ensemble, m, n, &mut rng)?;
        let x = unit_sphere(n, &mut rng);
        violations += u64::from(violates(&phi, &x, alpha));
    }
    Ok(ConcentrationReport::new(
        Some(ensemble),
        alpha,
        m,
        n,
        trials,
        violations,
    ))
}

/// Same check for one fixed matrix, drawing only `x`.
pub fn concentration_check_fixed(phi: &Matrix, alpha: f64, trials: u64, seed: u64) -> Result<ConcentrationReport> {
    check(alpha, trials)?;
    let mut rng = rng::seeded(seed);
    let mut violations = 0;
    for _ in 0..trials {
        let x = unit_sphere(phi.cols(), &mut rng);
        violations += u64::from(violates(phi, &x, alpha));
    }
    Ok(ConcentrationReport::new(
        None,
        alpha,
        phi.rows(),
        phi.cols(),
        trials,
        violations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_matrix_never_violates() {
        let (s, c) = 0.3f64.sin_cos();
        let q = Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let r = concentration_check_fixed(&q, 0.1, 500, 1).unwrap();
        assert_eq!(r.empirical_tail, 0.0);
        assert_eq!(r.fitted_c, None);
    }

    #[test]
    fn fitted_constant_makes_bound_tight() {
        let r = ConcentrationReport::new(None, 0.5, 16, 16, 1000, 40);
        let c = r.fitted_c.unwrap();
        assert!((r.bound_at(c) - r.empirical_tail).abs() < 1e-12);
    }

    #[test]
    fn rejects_alpha_out_of_range() {
        assert!(concentration_check(Ensemble::Gaussian, 4, 4, 1.0, 10, 0).is_err());
        assert!(concentration_check(Ensemble::Gaussian, 4, 4, 0.0, 10, 0).is_err());
    }
}
