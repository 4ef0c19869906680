use log::warn;

use crate::diagnostics::{estimate_rip, mutual_coherence, RipEstimate};
use crate::error::{Error, PartialSolution, Result};
use crate::linalg::{dot, normalize_columns, Matrix, Vector};
use crate::solvers::{accelerated_lb_gram, cosamp, GramSystem, SolveConfig, SparseSolution, ALPHA_MULTIPLIER};

use super::sparse::SparseBasis;

/// Coherence above which the model is flagged: near-duplicate atoms split
/// their self-codes and Ω stops resembling the identity.
pub const COHERENCE_WARNING: f64 = 0.99;

/// Smallest second-stage tolerance.
pub const MIN_SECOND_STAGE_TOLERANCE: f64 = 1e-12;

/// Largest integer `K ≤ √(m(N−1)/(N−m)) + 1`, the sparsity at which the
/// Welch bound still permits unique recovery.
pub fn choose_sparsity(m: usize, n: usize) -> Result<usize> {
    Ok(sparsity_bound(m, n)?.floor() as usize)
}

/// Unfloored `√(m(N−1)/(N−m)) + 1`.
pub fn sparsity_bound(m: usize, n: usize) -> Result<f64> {
    if m == 0 || n <= m {
        return Err(Error::domain(format!(
            "sparsity bound needs N > m ≥ 1, got m={m}, N={n}"
        )));
    }
    let (m, n) = (m as f64, n as f64);
    Ok((m * (n - 1.0) / (n - m)).sqrt() + 1.0)
}

/// Non-fatal findings recorded while building a model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelWarning {
    Coherence {
        coherence: f64,
    },
    /// Stage-1 codes that hit the iteration cap; their last iterate is kept.
    Stage1Unconverged {
        columns: usize,
    },
}

/// Build settings beyond the spec'd `(train, labels, k, stage1)` tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    pub k: usize,
    pub stage1: SolveConfig,
    /// Monte Carlo supports for the `δ̂_K` estimate behind the default
    /// second-stage tolerance.
    pub rip_trials: u64,
    pub rip_seed: u64,
    pub query_max_iterations: usize,
}

impl ModelOptions {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            stage1: default_stage1_config(),
            rip_trials: 200,
            rip_seed: 0,
            query_max_iterations: 100,
        }
    }
}

/// ALB settings for self-coding the training atoms. `α` is left unset:
/// an atom's sparsest code in its own dictionary is the unit vector, so
/// the default is `10·1`.
pub fn default_stage1_config() -> SolveConfig {
    SolveConfig::new(3000, 1e-6)
}

/// Trained two-stage model. Immutable once built.
#[derive(Debug, Clone)]
pub struct TssrModel {
    pub(crate) psi: Matrix,
    pub(crate) omega: Matrix,
    pub(crate) omega_sparse: SparseBasis,
    pub(crate) labels: Vec<usize>,
    pub(crate) class_count: usize,
    pub(crate) k: usize,
    pub(crate) stage1_config: SolveConfig,
    pub(crate) stage1_residuals: Vec<f64>,
    pub(crate) diag_dominance: f64,
    pub(crate) model_residual: f64,
    pub(crate) coherence: Option<f64>,
    pub(crate) rip: Option<RipEstimate>,
    pub(crate) second_stage_tolerance: f64,
    pub(crate) query_max_iterations: usize,
    pub(crate) rip_trials: u64,
    pub(crate) rip_seed: u64,
    pub(crate) warnings: Vec<ModelWarning>,
}

pub fn build_model(train: &Matrix, labels: &[usize], k: usize, stage1_config: &SolveConfig) -> Result<TssrModel> {
    let mut opts = ModelOptions::new(k);
    opts.stage1 = stage1_config.clone();
    build_model_with(train, labels, &opts)
}

pub fn build_model_with(train: &Matrix, labels: &[usize], opts: &ModelOptions) -> Result<TssrModel> {
    if labels.len() != train.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} training columns",
            labels.len(),
            train.cols()
        )));
    }
    let psi = normalize_columns(train)?;
    let n = psi.cols();
    let gram = psi.gram();
    let alpha = opts.stage1.alpha.unwrap_or(ALPHA_MULTIPLIER);

    let mut omega = vec![0.0; n * n];
    let mut unconverged = 0;
    for j in 0..n {
        let psi_j = psi.column(j);
        let system = GramSystem {
            gram: &gram,
            correlation: gram.column(j),
            target_norm_sq: dot(psi_j, psi_j),
        };
        let code = match accelerated_lb_gram(&psi, &system, psi_j, alpha, &opts.stage1) {
            Err(Error::MaxIterations { partial, .. }) => {
                unconverged += 1;
                *partial
            }
            other => other?,
        };
        omega[j * n..(j + 1) * n].copy_from_slice(&code.x);
    }
    let omega = Matrix::from_parts(n, n, omega);

    let mut warnings = Vec::new();
    if unconverged > 0 {
        warn!("{unconverged} of {n} stage-1 codes hit the iteration cap");
        warnings.push(ModelWarning::Stage1Unconverged { columns: unconverged });
    }
    let coherence = mutual_coherence(&psi).ok();
    if let Some(c) = coherence.filter(|&c| c > COHERENCE_WARNING) {
        warn!("training dictionary coherence {c:.4} exceeds {COHERENCE_WARNING}");
        warnings.push(ModelWarning::Coherence { coherence: c });
    }
    TssrModel::assemble(
        psi,
        omega,
        labels.to_vec(),
        opts.k,
        opts.stage1.clone(),
        coherence,
        warnings,
        opts,
    )
}

impl TssrModel {
    /// Derive every quantity that follows from `(Ψ, Ω, labels, K)`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        psi: Matrix,
        omega: Matrix,
        labels: Vec<usize>,
        k: usize,
        stage1_config: SolveConfig,
        coherence: Option<f64>,
        warnings: Vec<ModelWarning>,
        opts: &ModelOptions,
    ) -> Result<TssrModel> {
        let n = psi.cols();
        if k == 0 || k > n {
            return Err(Error::InvalidConfig(format!("sparsity K must be in 1..={n}, got {k}")));
        }
        let recon = psi.matmul(&omega)?;
        let stage1_residuals: Vec<f64> = (0..n)
            .map(|j| crate::linalg::norm2(&crate::linalg::sub(psi.column(j), recon.column(j))))
            .collect();
        let model_residual = stage1_residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
        let class_count = labels.iter().max().map_or(0, |&l| l + 1);
        let mut model = TssrModel {
            omega_sparse: SparseBasis::from_dense(&omega),
            diag_dominance: diag_dominance(&omega),
            psi,
            omega,
            labels,
            class_count,
            k,
            stage1_config,
            stage1_residuals,
            model_residual,
            coherence,
            rip: None,
            second_stage_tolerance: MIN_SECOND_STAGE_TOLERANCE,
            query_max_iterations: opts.query_max_iterations,
            rip_trials: opts.rip_trials,
            rip_seed: opts.rip_seed,
            warnings,
        };
        model.refresh_sparsity_dependent()?;
        Ok(model)
    }

    fn refresh_sparsity_dependent(&mut self) -> Result<()> {
        let order = self.k.min(self.psi.rows());
        self.rip = Some(estimate_rip(&self.psi, order, self.rip_trials, self.rip_seed)?);
        self.second_stage_tolerance = self.projection_scale() * median(&self.stage1_residuals);
        self.second_stage_tolerance = self.second_stage_tolerance.max(MIN_SECOND_STAGE_TOLERANCE);
        Ok(())
    }

    /// `(K+1)/√(1−δ̂_K)`, or `K+1` when the estimate is not below one.
    fn projection_scale(&self) -> f64 {
        let k1 = (self.k + 1) as f64;
        match self.rip {
            Some(r) if r.delta_hat < 1.0 => k1 / (1.0 - r.delta_hat).sqrt(),
            _ => k1,
        }
    }

    /// Same model at a different sparsity; stage 1 is not rerun since it
    /// does not depend on `K`.
    pub fn with_sparsity(&self, k: usize) -> Result<TssrModel> {
        if k == 0 || k > self.psi.cols() {
            return Err(Error::InvalidConfig(format!(
                "sparsity K must be in 1..={}, got {k}",
                self.psi.cols()
            )));
        }
        let mut m = self.clone();
        m.k = k;
        m.refresh_sparsity_dependent()?;
        Ok(m)
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn omega_sparse(&self) -> &SparseBasis {
        &self.omega_sparse
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stage1_config(&self) -> &SolveConfig {
        &self.stage1_config
    }

    pub fn diag_dominance(&self) -> f64 {
        self.diag_dominance
    }

    /// `‖Ψ − ΨΩ‖_F`.
    pub fn model_residual(&self) -> f64 {
        self.model_residual
    }

    /// `‖ψ_j − Ψω_j‖₂` per training atom.
    pub fn stage1_residuals(&self) -> &[f64] {
        &self.stage1_residuals
    }

    pub fn coherence(&self) -> Option<f64> {
        self.coherence
    }

    /// `δ̂_K` of Ψ (Monte Carlo lower bound unless exhaustive).
    pub fn rip_estimate(&self) -> Option<RipEstimate> {
        self.rip
    }

    pub fn warnings(&self) -> &[ModelWarning] {
        &self.warnings
    }

    /// `ε₂`, the default residual target of the second stage.
    pub fn second_stage_tolerance(&self) -> f64 {
        self.second_stage_tolerance
    }

    /// `(K+1)ε̂/√(1−δ̂_K)` with `ε̂` the largest stage-1 residual; `None`
    /// when `δ̂_K ≥ 1`.
    pub fn projection_bound(&self) -> Option<f64> {
        let rip = self.rip?;
        if rip.delta_hat >= 1.0 {
            return None;
        }
        let eps = self.stage1_residuals.iter().fold(0.0f64, |a, &r| a.max(r));
        Some((self.k + 1) as f64 * eps / (1.0 - rip.delta_hat).sqrt())
    }

    /// CoSaMP settings for coding queries over Ψ.
    pub fn encode_config(&self) -> SolveConfig {
        SolveConfig::new(self.query_max_iterations, 1e-10).with_sparsity(self.k)
    }

    /// CoSaMP settings for the second stage over Ω.
    pub fn second_stage_config(&self) -> SolveConfig {
        SolveConfig::new(self.query_max_iterations, self.second_stage_tolerance).with_sparsity(self.k)
    }

    /// Code a query over Ψ: `y ≈ Ψz` with `‖z‖₀ ≤ K`.
    pub fn encode_test(&self, y: &Vector) -> Result<SparseSolution> {
        cosamp(&self.psi, y, &self.encode_config())
    }

    /// Code the stage-1 feature over Ω: `z ≈ Ωx` with `‖x‖₀ ≤ K`.
    pub fn solve_second_stage(&self, z: &Vector, cfg: &SolveConfig) -> Result<SparseSolution> {
        cosamp(&self.omega_sparse, z, cfg)
    }

    pub(crate) fn encode_partial(&self, y: &Vector) -> Result<SparseSolution> {
        self.encode_test(y).or_partial()
    }
}

/// Share of columns whose largest-magnitude entry sits on the diagonal
/// (lowest row wins ties; all-zero columns do not count).
pub fn diag_dominance(omega: &Matrix) -> f64 {
    let n = omega.cols();
    if n == 0 {
        return 0.0;
    }
    let hits = (0..n)
        .filter(|&j| {
            let col = omega.column(j);
            let mut best = 0;
            for (i, v) in col.iter().enumerate() {
                if v.abs() > col[best].abs() {
                    best = i;
                }
            }
            best == j && col[j] != 0.0
        })
        .count();
    hits as f64 / n as f64
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}
