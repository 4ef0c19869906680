//! Dense kernels checked against nalgebra.

use nalgebra::DMatrix;
use proptest::prelude::*;
use tssr_core::dataio::{synth_sensing, Ensemble};
use tssr_core::linalg::{
    dot, least_squares_min_norm, least_squares_on_support, normalize_columns, singular_extremes, singular_values,
    spectral_norm_sq,
};
use tssr_core::{Matrix, Support, Vector};

fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_column_slice(a.rows(), a.cols(), a.as_slice())
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3.0f64..3.0, r * c).prop_map(move |d| Matrix::from_col_major(r, c, d).unwrap())
    })
}

#[test]
fn singular_values_match_nalgebra() {
    for (seed, (m, n)) in [(6, 10), (10, 6), (12, 12), (30, 4)].into_iter().enumerate() {
        let a = synth_sensing(Ensemble::Gaussian, m, n, seed as u64).unwrap();
        let mut expect: Vec<f64> = to_na(&a).singular_values().iter().copied().collect();
        expect.sort_by(|x, y| y.total_cmp(x));
        let got = singular_values(&a);
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-10 * (1.0 + e), "{g} vs {e}");
        }
        let (lo, hi) = singular_extremes(&a);
        assert!((hi - expect[0]).abs() < 1e-10);
        let lo_expect = *expect.last().unwrap();
        assert!((lo - lo_expect).abs() < 1e-10, "{lo} vs {lo_expect}");
    }
}

#[test]
fn spectral_norm_matches_nalgebra() {
    let a = synth_sensing(Ensemble::Gaussian, 40, 90, 3).unwrap();
    let s = to_na(&a).singular_values().max();
    assert!((spectral_norm_sq(&a) - s * s).abs() < 1e-6 * s * s);
}

#[test]
fn least_squares_matches_nalgebra_svd_solve() {
    let a = synth_sensing(Ensemble::Gaussian, 20, 7, 11).unwrap();
    let y: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
    let ls = least_squares_min_norm(&a, &y).unwrap();
    assert_eq!(ls.rank, 7);
    let expect = to_na(&a)
        .svd(true, true)
        .solve(&nalgebra::DVector::from_column_slice(&y), 1e-12)
        .unwrap();
    for (g, e) in ls.coefficients.iter().zip(expect.iter()) {
        assert!((g - e).abs() < 1e-10, "{g} vs {e}");
    }
}

#[test]
fn least_squares_on_support_embeds() {
    let a = synth_sensing(Ensemble::Gaussian, 15, 30, 2).unwrap();
    let mut x = vec![0.0; 30];
    x[3] = 1.5;
    x[17] = -0.7;
    x[29] = 0.2;
    let y = Vector::new(a.mul_vec(&x)).unwrap();
    let s = Support::new(vec![3, 17, 29], 30).unwrap();
    let fit = least_squares_on_support(&a, &y, &s).unwrap();
    for (g, e) in fit.iter().zip(&x) {
        assert!((g - e).abs() < 1e-12);
    }
}

#[test]
fn min_norm_of_rank_deficient_system_matches_pseudo_inverse() {
    // Third column equals the sum of the first two.
    let a = Matrix::from_rows(&[
        vec![1.0, 0.0, 1.0],
        vec![0.0, 1.0, 1.0],
        vec![1.0, 1.0, 2.0],
        vec![2.0, -1.0, 1.0],
    ])
    .unwrap();
    let y = [1.0, 2.0, 0.5, -1.0];
    let ls = least_squares_min_norm(&a, &y).unwrap();
    assert_eq!(ls.rank, 2);
    let pinv = to_na(&a).pseudo_inverse(1e-12).unwrap();
    let expect = pinv * nalgebra::DVector::from_column_slice(&y);
    for (g, e) in ls.coefficients.iter().zip(expect.iter()) {
        assert!((g - e).abs() < 1e-10, "{g} vs {e}");
    }
}

proptest! {
    #[test]
    fn normalized_columns_are_unit(a in matrix(8, 8)) {
        prop_assume!(a.column_norms().iter().all(|&n| n > 1e-6));
        let b = normalize_columns(&a).unwrap();
        for n in b.column_norms() {
            prop_assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn transpose_products_agree(a in matrix(7, 9), seed in 0u64..1000) {
        let x: Vec<f64> = (0..a.cols()).map(|j| ((j as u64 * 31 + seed) % 17) as f64 - 8.0).collect();
        let r: Vec<f64> = (0..a.rows()).map(|i| ((i as u64 * 7 + seed) % 5) as f64 - 2.0).collect();
        // ⟨Ax, r⟩ = ⟨x, Aᵀr⟩
        let lhs = dot(&a.mul_vec(&x), &r);
        let rhs = dot(&x, &a.tr_mul_vec(&r));
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        prop_assert_eq!(a.transpose().transpose(), a.clone());
    }

    #[test]
    fn gram_is_symmetric_and_matches_product(a in matrix(6, 6)) {
        let g = a.gram();
        let p = a.transpose().matmul(&a).unwrap();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                prop_assert!((g.get(i, j) - g.get(j, i)).abs() < 1e-12);
                prop_assert!((g.get(i, j) - p.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn least_squares_residual_is_orthogonal(a in matrix(10, 5)) {
        let y: Vec<f64> = (0..a.rows()).map(|i| (i as f64).cos()).collect();
        let ls = least_squares_min_norm(&a, &y).unwrap();
        let r: Vec<f64> = y.iter().zip(a.mul_vec(&ls.coefficients)).map(|(a, b)| a - b).collect();
        let scale = a.frobenius_norm() * (1.0 + tssr_core::linalg::norm2(&y));
        for g in a.tr_mul_vec(&r) {
            prop_assert!(g.abs() < 1e-8 * scale, "{}", g);
        }
    }
}
