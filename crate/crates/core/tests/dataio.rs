use proptest::prelude::*;
use tssr_core::dataio::{
    decode_bin, encode_bin, load_labels, load_matrix, parse_csv, save_labels, save_matrix, split, synth_classification,
    synth_problem, synth_sensing, to_csv, Ensemble, Format, LabeledDataset, SplitSpec, TestCount,
};
use tssr_core::linalg::norm2;
use tssr_core::{Error, Matrix};

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    synth_sensing(Ensemble::Gaussian, rows, cols, seed).unwrap()
}

#[test]
fn bin_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.bin");
    let a = random_matrix(10, 10, 4);
    save_matrix(&path, &a, Format::from_path(&path)).unwrap();
    let b = load_matrix(&path, Format::Bin).unwrap();
    let bits = |m: &Matrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.shape(), b.shape());
}

#[test]
fn csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let a = random_matrix(7, 5, 9);
    save_matrix(&path, &a, Format::Csv).unwrap();
    let b = load_matrix(&path, Format::from_path(&path)).unwrap();
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        assert!((x - y).abs() <= 1e-15 * x.abs());
    }
}

#[test]
fn csv_examples() {
    assert_eq!(parse_csv("1,0\n0,1").unwrap(), Matrix::identity(2));
    assert_eq!(parse_csv("# header\n1,0\n0,1\n").unwrap(), Matrix::identity(2));
    match parse_csv("1,2\n3,4\n5\n") {
        Err(Error::Parse { location, .. }) => assert!(location.contains('3'), "{location}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(parse_csv("1,x\n"), Err(Error::Parse { .. })));
    assert!(parse_csv("1,NaN\n").is_err());
    let text = to_csv(&Matrix::from_rows(&[vec![0.1, -2.5]]).unwrap());
    assert_eq!(parse_csv(&text).unwrap().as_slice(), &[0.1, -2.5]);
}

#[test]
fn bin_rejects_bad_input() {
    let bytes = encode_bin(&random_matrix(3, 2, 1));
    assert!(matches!(
        decode_bin(&bytes[..bytes.len() - 1]),
        Err(Error::DimensionMismatch(_))
    ));
    let mut bad = bytes.clone();
    bad[..4].copy_from_slice(b"XXXX");
    assert!(matches!(decode_bin(&bad), Err(Error::Parse { .. })));
}

#[test]
fn labels_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.labels");
    let labels = vec![0, 2, 1, 1, 0];
    save_labels(&path, &labels).unwrap();
    assert_eq!(load_labels(&path).unwrap(), labels);
}

#[test]
fn ensemble_examples() {
    let b = synth_sensing(Ensemble::BernoulliPm1, 4, 4, 11).unwrap();
    assert!(b.as_slice().iter().all(|&v| v == 0.5 || v == -0.5));
    let g = synth_sensing(Ensemble::NormalizedGaussian, 12, 30, 3).unwrap();
    for nrm in g.column_norms() {
        assert!((nrm - 1.0).abs() < 1e-12);
    }
    assert_eq!(
        synth_sensing(Ensemble::Gaussian, 5, 6, 8).unwrap(),
        synth_sensing(Ensemble::Gaussian, 5, 6, 8).unwrap()
    );
    assert_ne!(
        synth_sensing(Ensemble::Gaussian, 5, 6, 8).unwrap(),
        synth_sensing(Ensemble::Gaussian, 5, 6, 9).unwrap()
    );
}

#[test]
fn gaussian_column_energy_has_unit_mean() {
    let m = 100;
    let seeds = 10_000;
    let mean = (0..seeds)
        .map(|s| norm2(synth_sensing(Ensemble::Gaussian, m, 1, s).unwrap().column(0)).powi(2))
        .sum::<f64>()
        / seeds as f64;
    // ‖column‖² ~ χ²_m/m has variance 2/m.
    let sigma = (2.0 / m as f64).sqrt() / (seeds as f64).sqrt();
    assert!((mean - 1.0).abs() < 3.0 * sigma, "{mean}");
}

#[test]
fn problem_examples() {
    let p = synth_problem(20, 40, 4, 0.0, Ensemble::Gaussian, 5).unwrap();
    assert_eq!(p.x_true.iter().filter(|&&v| v != 0.0).count(), 4);
    let r: Vec<f64> = p.y.iter().zip(p.phi.mul_vec(&p.x_true)).map(|(a, b)| a - b).collect();
    assert_eq!(norm2(&r), 0.0);

    let noise = synth_problem(20, 40, 0, 0.1, Ensemble::Gaussian, 5).unwrap();
    assert!(noise.x_true.iter().all(|&v| v == 0.0));
    assert!(norm2(&noise.y) > 0.0);

    let again = synth_problem(20, 40, 4, 0.0, Ensemble::Gaussian, 5).unwrap();
    assert_eq!((again.phi, again.x_true, again.y), (p.phi, p.x_true, p.y));
    assert!(synth_problem(5, 6, 7, 0.0, Ensemble::Gaussian, 0).is_err());
}

#[test]
fn classification_examples() {
    let ds = synth_classification(3, 4, 8, 0.0, 1).unwrap();
    for c in 0..3 {
        let cols = ds.class_columns(c);
        for &j in &cols[1..] {
            assert_eq!(ds.samples.column(j), ds.samples.column(cols[0]));
        }
    }
    assert_eq!(
        synth_classification(3, 4, 8, 0.2, 1).unwrap(),
        synth_classification(3, 4, 8, 0.2, 1).unwrap()
    );
    assert!(synth_classification(0, 4, 8, 0.2, 1).is_err());
    assert!(synth_classification(3, 0, 8, 0.2, 1).is_err());
}

#[test]
fn nearest_centroid_separates_synthetic_classes() {
    let ds = synth_classification(40, 12, 64, 0.2, 7).unwrap();
    let spec = SplitSpec {
        train_per_class: 6,
        test_per_class: TestCount::Rest,
        seed: 7,
    };
    let (train, test) = split(&ds, &spec).unwrap();
    let centroids: Vec<Vec<f64>> = (0..40)
        .map(|c| {
            let mut mean = vec![0.0; 64];
            for j in train.class_columns(c) {
                for (m, v) in mean.iter_mut().zip(train.samples.column(j)) {
                    *m += v;
                }
            }
            mean
        })
        .collect();
    let correct = (0..test.len())
        .filter(|&j| {
            let y = test.samples.column(j);
            let dist = |c: &Vec<f64>| {
                let nc = norm2(c);
                y.iter().zip(c).map(|(a, b)| (a - b / nc).powi(2)).sum::<f64>()
            };
            let best = (0..40)
                .min_by(|&a, &b| dist(&centroids[a]).total_cmp(&dist(&centroids[b])))
                .unwrap();
            best == test.labels[j]
        })
        .count();
    let acc = correct as f64 / test.len() as f64;
    assert!(acc > 0.95, "{acc}");
}

#[test]
fn split_boundaries() {
    let ds = synth_classification(3, 4, 6, 0.3, 2).unwrap();
    let all = SplitSpec {
        train_per_class: 4,
        test_per_class: TestCount::Rest,
        seed: 0,
    };
    let (train, test) = split(&ds, &all).unwrap();
    assert_eq!((train.len(), test.len()), (12, 0));
    let too_many = SplitSpec {
        train_per_class: 3,
        test_per_class: TestCount::Count(2),
        seed: 0,
    };
    assert!(matches!(
        split(&ds, &too_many),
        Err(Error::InsufficientSamples { requested: 5, .. })
    ));
    let spec = SplitSpec {
        train_per_class: 2,
        test_per_class: TestCount::Count(1),
        seed: 5,
    };
    assert_eq!(split(&ds, &spec).unwrap(), split(&ds, &spec).unwrap());
}

#[test]
fn dataset_validation() {
    let samples = Matrix::identity(3);
    assert!(LabeledDataset::new(samples.clone(), vec![0, 1], 2, "t").is_err());
    assert!(LabeledDataset::new(samples.clone(), vec![0, 1, 2], 2, "t").is_err());
    assert!(LabeledDataset::new(samples, vec![0, 1, 1], 2, "t").is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_preserves_samples_and_labels(
        classes in 1usize..5,
        per_class in 2usize..7,
        train in 1usize..3,
        seed in any::<u64>(),
    ) {
        prop_assume!(train <= per_class);
        let ds = synth_classification(classes, per_class, 5, 0.4, seed).unwrap();
        let spec = SplitSpec { train_per_class: train, test_per_class: TestCount::Rest, seed };
        let (tr, te) = split(&ds, &spec).unwrap();
        prop_assert_eq!(tr.len() + te.len(), ds.len());
        for c in 0..classes {
            prop_assert_eq!(tr.class_columns(c).len(), train);
        }
        let mut got: Vec<(usize, Vec<u64>)> = tr.labels.iter().zip(tr.samples.columns())
            .chain(te.labels.iter().zip(te.samples.columns()))
            .map(|(&l, col)| (l, col.iter().map(|v| v.to_bits()).collect()))
            .collect();
        let mut want: Vec<(usize, Vec<u64>)> = ds.labels.iter().zip(ds.samples.columns())
            .map(|(&l, col)| (l, col.iter().map(|v| v.to_bits()).collect()))
            .collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn bin_round_trips_any_finite_matrix(
        rows in 1usize..6,
        cols in 1usize..6,
        values in prop::collection::vec(-1e300f64..1e300, 36),
    ) {
        let a = Matrix::from_col_major(rows, cols, values[..rows * cols].to_vec()).unwrap();
        prop_assert_eq!(decode_bin(&encode_bin(&a)).unwrap(), a.clone());
        let b = parse_csv(&to_csv(&a)).unwrap();
        prop_assert_eq!(b, a);
    }
}
