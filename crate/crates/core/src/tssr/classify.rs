use std::time::{Duration, Instant};

use crate::error::{Error, PartialSolution, Result, Stage};
use crate::linalg::{norm2, sub, Vector};
use crate::solvers::SparseSolution;

use super::TssrModel;

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: usize,
    /// Residual per class, indexed by class.
    pub residuals: Vec<f64>,
    /// Second-smallest minus smallest residual; zero with a single class.
    pub margin: f64,
}

impl Classification {
    /// Smallest residual wins; ties go to the lowest class index.
    pub fn from_residuals(residuals: Vec<f64>) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::EmptyClass(0));
        }
        let mut label = 0;
        for (c, &r) in residuals.iter().enumerate() {
            if r < residuals[label] {
                label = c;
            }
        }
        let runner_up = residuals
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != label)
            .map(|(_, &r)| r)
            .fold(f64::INFINITY, f64::min);
        let margin = if runner_up.is_finite() {
            runner_up - residuals[label]
        } else {
            0.0
        };
        Ok(Self {
            label,
            residuals,
            margin,
        })
    }
}

impl TssrModel {
    fn check_classes(&self) -> Result<()> {
        let mut sizes = vec![0usize; self.class_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        match sizes.iter().position(|&s| s == 0) {
            Some(c) => Err(Error::EmptyClass(c)),
            None if self.class_count == 0 => Err(Error::EmptyClass(0)),
            None => Ok(()),
        }
    }

    /// Coefficient-space SRC: `‖z − Ω·δ_c(x)‖₂` per class.
    pub fn classify_src(&self, x: &[f64], z: &[f64]) -> Result<Classification> {
        let n = self.psi.cols();
        if x.len() != n || z.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "coefficient vectors must have length {n}, got {} and {}",
                x.len(),
                z.len()
            )));
        }
        self.check_classes()?;
        // Only rows touched by z or by the class reconstruction differ from
        // zero, so each class costs O(nnz) rather than O(N).
        let z_support: Vec<usize> = (0..n).filter(|&i| z[i] != 0.0).collect();
        let z_norm_sq: f64 = z_support.iter().map(|&i| z[i] * z[i]).sum();
        let mut recon = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut residuals = vec![z_norm_sq.sqrt(); self.class_count];
        for (c, residual) in residuals.iter_mut().enumerate() {
            touched.clear();
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0.0 || self.labels[j] != c {
                    continue;
                }
                let (rows, vals) = self.omega_sparse.column(j);
                for (&i, &v) in rows.iter().zip(vals) {
                    if recon[i] == 0.0 {
                        touched.push(i);
                    }
                    recon[i] += xj * v;
                }
            }
            if touched.is_empty() {
                continue;
            }
            touched.extend_from_slice(&z_support);
            touched.sort_unstable();
            touched.dedup();
            let sq: f64 = touched.iter().map(|&i| (z[i] - recon[i]).powi(2)).sum();
            *residual = sq.sqrt();
            for &i in &touched {
                recon[i] = 0.0;
            }
        }
        Classification::from_residuals(residuals)
    }

    /// Signal-space SRC: `‖y − ΨΩ·δ_c(x)‖₂` per class.
    pub fn classify_src_signal(&self, x: &[f64], y: &[f64]) -> Result<Classification> {
        if y.len() != self.psi.rows() || x.len() != self.psi.cols() {
            return Err(Error::DimensionMismatch(
                "query or coefficient length does not match the model".into(),
            ));
        }
        self.check_classes()?;
        let residuals = (0..self.class_count)
            .map(|c| {
                let xc = restrict(x, &self.labels, c);
                let coef = crate::linalg::Dictionary::apply(&self.omega_sparse, &xc);
                norm2(&sub(y, &self.psi.mul_vec(&coef)))
            })
            .collect();
        Classification::from_residuals(residuals)
    }
}

/// `δ_c(x)`: zero every coefficient outside class `c`.
pub fn restrict(x: &[f64], labels: &[usize], c: usize) -> Vec<f64> {
    x.iter()
        .zip(labels)
        .map(|(&v, &l)| if l == c { v } else { 0.0 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageTimings {
    pub encode: Duration,
    pub second_stage: Duration,
    pub classify: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.encode + self.second_stage + self.classify
    }
}

#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub classification: Classification,
    /// Stage-1 feature `z` over Ψ.
    pub z: SparseSolution,
    /// Stage-2 coefficients `x` over Ω.
    pub x: SparseSolution,
    pub timings: StageTimings,
}

/// Encode over Ψ, code the feature over Ω, classify. A solver that runs out
/// of iterations contributes its last iterate; other failures are returned
/// tagged with their stage.
pub fn tssr_pipeline(model: &TssrModel, y: &Vector) -> Result<QueryOutcome> {
    if y.len() != model.psi.rows() {
        return Err(Error::DimensionMismatch(format!(
            "query has {} entries, model expects {}",
            y.len(),
            model.psi.rows()
        ))
        .at_stage(Stage::Encode));
    }
    if y.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateQuery);
    }
    let t0 = Instant::now();
    let z = model.encode_partial(y).map_err(|e| e.at_stage(Stage::Encode))?;
    let t1 = Instant::now();
    let x = model
        .solve_second_stage(&z.x, &model.second_stage_config())
        .or_partial()
        .map_err(|e| e.at_stage(Stage::SecondStage))?;
    let t2 = Instant::now();
    let classification = model
        .classify_src(&x.x, &z.x)
        .map_err(|e| e.at_stage(Stage::Classify))?;
    let t3 = Instant::now();
    Ok(QueryOutcome {
        classification,
        z,
        x,
        timings: StageTimings {
            encode: t1 - t0,
            second_stage: t2 - t1,
            classify: t3 - t2,
        },
    })
}
