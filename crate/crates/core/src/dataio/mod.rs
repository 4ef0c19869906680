//! Datasets, generators, train/test splitting and file formats.

mod formats;
mod synth;

pub use formats::{
    decode_bin, encode_bin, load_labels, load_matrix, parse_csv, parse_labels, save_labels, save_matrix, to_csv,
    Format, BIN_MAGIC, BIN_VERSION,
};
pub(crate) use formats::{dim_u32, put_f64s, ByteReader};
pub(crate) use synth::{sensing_from, unit_sphere};
pub use synth::{synth_classification, synth_problem, synth_sensing, Ensemble, SyntheticProblem, SPIKE_JITTER};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng;

/// Samples as columns with one class index per column.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub samples: Matrix,
    pub labels: Vec<usize>,
    pub class_count: usize,
    /// File path or generator description.
    pub source: String,
}

impl LabeledDataset {
    pub fn new(samples: Matrix, labels: Vec<usize>, class_count: usize, source: impl Into<String>) -> Result<Self> {
        if labels.len() != samples.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} samples",
                labels.len(),
                samples.cols()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::InvalidConfig(format!(
                "label {bad} out of range for {class_count} classes"
            )));
        }
        Ok(Self {
            samples,
            labels,
            class_count,
            source: source.into(),
        })
    }

    /// Dataset from files; the class count is one past the largest label.
    pub fn load(matrix: &std::path::Path, labels: &std::path::Path) -> Result<Self> {
        let samples = load_matrix(matrix, Format::from_path(matrix))?;
        let labels = load_labels(labels)?;
        let class_count = labels.iter().max().map_or(0, |&l| l + 1);
        Self::new(samples, labels, class_count, matrix.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Column indices belonging to class `c`, ascending.
    pub fn class_columns(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&j| self.labels[j] == c).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    fn subset(&self, columns: &[usize], source: String) -> Result<Self> {
        let m = self.samples.rows();
        let cols: Vec<&[f64]> = columns.iter().map(|&j| self.samples.column(j)).collect();
        let samples = Matrix::from_columns(m, &cols)?;
        let labels = columns.iter().map(|&j| self.labels[j]).collect();
        Self::new(samples, labels, self.class_count, source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestCount {
    Count(usize),
    /// Everything not drawn for training.
    Rest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub test_per_class: TestCount,
    pub seed: u64,
}

/// Per-class random split without replacement. Within each class the
/// training columns come first in draw order; classes stay grouped.
pub fn split(ds: &LabeledDataset, spec: &SplitSpec) -> Result<(LabeledDataset, LabeledDataset)> {
    if spec.train_per_class == 0 {
        return Err(Error::InvalidConfig("train_per_class must be at least 1".into()));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in 0..ds.class_count {
        let mut cols = ds.class_columns(c);
        let wanted_test = match spec.test_per_class {
            TestCount::Count(t) => t,
            TestCount::Rest => cols.len().saturating_sub(spec.train_per_class),
        };
        let requested = spec.train_per_class + wanted_test;
        if cols.len() < requested {
            return Err(Error::InsufficientSamples {
                class: c,
                available: cols.len(),
                requested,
            });
        }
        cols.shuffle(&mut rng::substream(spec.seed, c as u64));
        train.extend_from_slice(&cols[..spec.train_per_class]);
        test.extend_from_slice(&cols[spec.train_per_class..requested]);
    }
    if test.is_empty() {
        log::warn!("split of {} leaves an empty test set", ds.source);
    }
    let train_set = ds.subset(&train, format!("{} [train, seed {}]", ds.source, spec.seed))?;
    let test_set = ds.subset(&test, format!("{} [test, seed {}]", ds.source, spec.seed))?;
    Ok((train_set, test_set))
}
