mod common;

use common::{householder_lstsq, ridge_oracle};
use memres::readout::{fit_ridge, fit_ridge_standardized};
use memres::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn problem(rng: &mut ChaCha8Rng, n: usize, p: usize) -> (Matrix, Vec<f64>) {
    let data: Vec<f64> = (0..n * p).map(|_| rng.random_range(-1.0..1.0)).collect();
    let x = Matrix::from_vec(n, p, data).unwrap();
    let w: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
    let y = x
        .iter_rows()
        .map(|r| 0.7 + r.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + 0.1 * rng.random_range(-1.0..1.0))
        .collect();
    (x, y)
}

#[test]
fn householder_solves_a_square_system() {
    let x = householder_lstsq(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]);
    assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14, "{x:?}");
}

#[test]
fn ridge_matches_augmented_qr_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (x, y) = problem(&mut rng, 200, 51);
        for alpha in [0.0, 1e-3, 1.0, 100.0] {
            let m = fit_ridge(&x, &y, alpha).unwrap();
            let (w, b) = ridge_oracle(x.iter_rows(), &y, alpha);
            let dw = m.weights.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dw).max((m.intercept - b).abs());
        }
    }
    assert!(worst <= 1e-8, "max weight difference {worst:e}");
}

#[test]
fn standardized_fit_equals_oracle_on_scaled_columns() {
    // Penalizing w on unit-variance columns is plain ridge on X/σ.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (x, y) = problem(&mut rng, 120, 6);
    let means = x.column_means();
    let sd: Vec<f64> = (0..x.cols())
        .map(|j| (x.iter_rows().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / x.rows() as f64).sqrt())
        .collect();
    let scaled: Vec<Vec<f64>> = x.iter_rows().map(|r| r.iter().zip(&sd).map(|(a, s)| a / s).collect()).collect();
    let m = fit_ridge_standardized(&x, &y, 3.0).unwrap();
    let (w, b) = ridge_oracle(scaled.iter().map(|r| r.as_slice()), &y, 3.0);
    for j in 0..x.cols() {
        assert!((m.weights[j] * sd[j] - w[j]).abs() < 1e-10);
    }
    assert!((m.intercept - b).abs() < 1e-10);
}
