//! Two-stage sparse representation classifier.
//!
//! Training columns, normalized, form the dictionary Ψ. Stage 1 codes each
//! training atom over Ψ with accelerated linearized Bregman; the codes form
//! the columns of Ω, which comes out close to the identity and is stored
//! sparse. A query `y` is coded over Ψ with CoSaMP (`y ≈ Ψz`), the feature
//! `z` is coded over Ω (`z ≈ Ωx`), and SRC picks the class whose
//! coefficients best reconstruct `z`.

mod classify;
mod io;
mod model;
mod sparse;

pub use classify::{restrict, tssr_pipeline, Classification, QueryOutcome, StageTimings};
pub use io::{MODEL_MAGIC, MODEL_VERSION};
pub use model::{
    build_model, build_model_with, choose_sparsity, default_stage1_config, diag_dominance, sparsity_bound,
    ModelOptions, ModelWarning, TssrModel, COHERENCE_WARNING, MIN_SECOND_STAGE_TOLERANCE,
};
pub use sparse::SparseBasis;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::{Matrix, Vector};

    #[test]
    fn sparsity_examples() {
        assert_eq!(choose_sparsity(132, 1209).unwrap(), 13);
        assert_eq!(choose_sparsity(4, 5).unwrap(), 5);
        assert!(choose_sparsity(6, 6).is_err());
    }

    #[test]
    fn orthonormal_training_gives_identity_omega() {
        let model = build_model(&Matrix::identity(6), &[0, 0, 1, 1, 2, 2], 2, &default_stage1_config()).unwrap();
        for (a, b) in model.omega().as_slice().iter().zip(Matrix::identity(6).as_slice()) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        assert_eq!(model.diag_dominance(), 1.0);
        assert!(model.warnings().is_empty());
    }

    #[test]
    fn duplicate_columns_warn() {
        let train = Matrix::from_col_major(2, 3, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let model = build_model(&train, &[0, 0, 1], 1, &default_stage1_config()).unwrap();
        assert!(model
            .warnings()
            .iter()
            .any(|w| matches!(w, ModelWarning::Coherence { .. })));
    }

    #[test]
    fn classification_ties_go_low() {
        let c = Classification::from_residuals(vec![1.0, 0.5, 0.5]).unwrap();
        assert_eq!((c.label, c.margin), (1, 0.0));
    }

    #[test]
    fn pipeline_classifies_training_atom_and_rejects_zero() {
        let model = build_model(&Matrix::identity(6), &[0, 0, 1, 1, 2, 2], 2, &default_stage1_config()).unwrap();
        let y = Vector::new(Matrix::identity(6).column(3).to_vec()).unwrap();
        let out = tssr_pipeline(&model, &y).unwrap();
        assert_eq!(out.classification.label, 1);
        assert!(out.classification.residuals[1] < 1e-6);
        assert!(matches!(
            tssr_pipeline(&model, &Vector::zeros(6)),
            Err(Error::DegenerateQuery)
        ));
    }

    #[test]
    fn empty_class_is_reported() {
        let model = build_model(&Matrix::identity(3), &[0, 2, 2], 1, &default_stage1_config()).unwrap();
        let z = vec![1.0, 0.0, 0.0];
        assert!(matches!(model.classify_src(&z, &z), Err(Error::EmptyClass(1))));
    }

    #[test]
    fn model_bytes_round_trip() {
        let model = build_model(&Matrix::identity(4), &[0, 1, 1, 0], 2, &default_stage1_config()).unwrap();
        let bytes = model.to_bytes();
        let back = TssrModel::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(back.labels(), model.labels());
        assert_eq!(back.k(), 2);
    }
}
