//! Seeded generators for sensing matrices, recovery problems and labeled
//! classification data.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{normalize_columns, Matrix, Vector};
use crate::rng::{self, Rng};

use super::LabeledDataset;

/// Random matrix ensembles, scaled so `E‖Φx‖² = ‖x‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// i.i.d. `N(0, 1/m)`.
    Gaussian,
    /// Gaussian with unit-norm columns.
    NormalizedGaussian,
    /// `±1/√m` with equal probability.
    BernoulliPm1,
}

impl Ensemble {
    pub const ALL: [Ensemble; 3] = [Ensemble::Gaussian, Ensemble::NormalizedGaussian, Ensemble::BernoulliPm1];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Gaussian => "gaussian",
            Ensemble::NormalizedGaussian => "normalized_gaussian",
            Ensemble::BernoulliPm1 => "bernoulli_pm1",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown ensemble `{s}`")))
    }
}

pub fn synth_sensing(ensemble: Ensemble, m: usize, n: usize, seed: u64) -> Result<Matrix> {
    let mut rng = rng::seeded(seed);
    sensing_from(ensemble, m, n, &mut rng)
}

pub(crate) fn sensing_from(ensemble: Ensemble, m: usize, n: usize, rng: &mut Rng) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::domain("sensing matrix needs at least one row"));
    }
    let scale = 1.0 / (m as f64).sqrt();
    let data: Vec<f64> = match ensemble {
        Ensemble::Gaussian | Ensemble::NormalizedGaussian => (0..m * n).map(|_| scale * gauss(rng)).collect(),
        Ensemble::BernoulliPm1 => (0..m * n)
            .map(|_| if rng.random::<bool>() { scale } else { -scale })
            .collect(),
    };
    let a = Matrix::from_col_major(m, n, data)?;
    match ensemble {
        Ensemble::NormalizedGaussian => normalize_columns(&a),
        _ => Ok(a),
    }
}

fn gauss(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform point on the unit sphere in `R^n`.
pub(crate) fn unit_sphere(n: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = crate::linalg::norm2(&v);
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Ground-truth recovery instance `y = Φx + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProblem {
    pub phi: Matrix,
    pub x_true: Vector,
    pub y: Vector,
}

/// Standard deviation of the jitter around the ±1 spike values.
pub const SPIKE_JITTER: f64 = 0.1;

pub fn synth_problem(
    m: usize,
    n: usize,
    k: usize,
    noise_sigma: f64,
    ensemble: Ensemble,
    seed: u64,
) -> Result<SyntheticProblem> {
    if k > n {
        return Err(Error::domain(format!("sparsity {k} exceeds dimension {n}")));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::domain(format!(
            "noise sigma must be nonnegative, got {noise_sigma}"
        )));
    }
    let phi = synth_sensing(ensemble, m, n, rng::derive_seed(seed, 0))?;

    let mut rng = rng::substream(seed, 1);
    let jitter = Normal::new(0.0, SPIKE_JITTER).expect("valid normal");
    let mut x = vec![0.0; n];
    let mut positions = sample(&mut rng, n, k).into_vec();
    positions.sort_unstable();
    for j in positions {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        x[j] = sign + jitter.sample(&mut rng);
    }

    let mut rng = rng::substream(seed, 2);
    let mut y = phi.mul_vec(&x);
    if noise_sigma > 0.0 {
        for v in &mut y {
            *v += noise_sigma * gauss(&mut rng);
        }
    }
    Ok(SyntheticProblem {
        phi,
        x_true: Vector::new(x)?,
        y: Vector::new(y)?,
    })
}

/// Labeled data with one random unit center per class. Each sample is
/// `center + spread·g` with `g ~ N(0, I/m)` (so `spread` is the relative
/// perturbation size), then normalized. Columns are grouped by class.
pub fn synth_classification(
    classes: usize,
    per_class: usize,
    m: usize,
    spread: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if classes == 0 || per_class == 0 || m == 0 {
        return Err(Error::domain(
            "classes, samples per class and dimension must be positive",
        ));
    }
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(Error::domain(format!("spread must be nonnegative, got {spread}")));
    }
    let scale = spread / (m as f64).sqrt();
    let mut data = Vec::with_capacity(m * classes * per_class);
    let mut labels = Vec::with_capacity(classes * per_class);
    for c in 0..classes {
        let mut rng = rng::substream(seed, c as u64);
        let center = unit_sphere(m, &mut rng);
        for _ in 0..per_class {
            let mut s: Vec<f64> = center.iter().map(|&v| v + scale * gauss(&mut rng)).collect();
            let norm = crate::linalg::norm2(&s);
            s.iter_mut().for_each(|v| *v /= norm);
            data.extend_from_slice(&s);
            labels.push(c);
        }
    }
    let samples = Matrix::from_col_major(m, classes * per_class, data)?;
    LabeledDataset::new(
        samples,
        labels,
        classes,
        format!("synth_classification(classes={classes},per_class={per_class},m={m},spread={spread},seed={seed})"),
    )
}
