use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Matrix;

use super::ridge::{mse, predict, RidgeSystem};
use super::split::shuffled_indices;
use super::ReadoutError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CvConfig {
    pub folds: usize,
    pub alpha_grid: Vec<f64>,
    /// Penalize unit-variance features rather than raw ones.
    pub standardize: bool,
}

impl Default for CvConfig {
    /// Five folds over `1e-9, 1e-8, …, 1e2`, standardized.
    fn default() -> Self {
        CvConfig {
            folds: 5,
            alpha_grid: default_alpha_grid(),
            standardize: true,
        }
    }
}

pub fn default_alpha_grid() -> Vec<f64> {
    (-9..=2).map(|e| 10f64.powi(e)).collect()
}

impl CvConfig {
    pub fn validate(&self) -> Result<(), ReadoutError> {
        if self.folds < 2 {
            return Err(ReadoutError::InvalidCv(format!("need at least 2 folds, got {}", self.folds)));
        }
        if self.alpha_grid.is_empty() {
            return Err(ReadoutError::InvalidCv("alpha grid is empty".into()));
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
            return Err(ReadoutError::InvalidAlpha(*a));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub best_alpha: f64,
    /// `(alpha, mean validation MSE)` in grid order.
    pub scores: Vec<(f64, f64)>,
}

/// Seeded, shuffled k-fold cross-validation over `cv.alpha_grid`.
///
/// Fold `f` validates on positions `[f·n/k, (f+1)·n/k)` of a seeded
/// permutation and trains on the rest. The best α minimizes mean validation
/// MSE; exact ties go to the larger α.
pub fn cross_validate(x: &Matrix, y: &[f64], cv: &CvConfig, seed: u64) -> Result<CvResult, ReadoutError> {
    cv.validate()?;
    if x.rows() != y.len() {
        return Err(ReadoutError::DimensionMismatch {
            expected: x.rows(),
            got: y.len(),
        });
    }
    let n = x.rows();
    if n < cv.folds {
        return Err(ReadoutError::TooFewRows { needed: cv.folds, got: n });
    }
    let perm = shuffled_indices(n, seed);
    let k = cv.folds;

    let per_fold: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|f| {
            let (lo, hi) = (f * n / k, (f + 1) * n / k);
            let val: Vec<usize> = perm[lo..hi].to_vec();
            let train: Vec<usize> = perm[..lo].iter().chain(&perm[hi..]).copied().collect();
            let xt = x.select_rows(&train);
            let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let xv = x.select_rows(&val);
            let yv: Vec<f64> = val.iter().map(|&i| y[i]).collect();
            let system = RidgeSystem::new(&xt, &yt, cv.standardize)?;
            cv.alpha_grid
                .iter()
                .map(|&a| {
                    let m = system.solve(a)?;
                    mse(&predict(&m, &xv)?, &yv)
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let scores: Vec<(f64, f64)> = cv
        .alpha_grid
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let total: f64 = per_fold.iter().map(|fold| fold[j]).sum();
            (a, total / k as f64)
        })
        .collect();
    let mut best = scores[0];
    for &(a, s) in &scores[1..] {
        if s < best.1 || (s == best.1 && a > best.0) {
            best = (a, s);
        }
    }
    Ok(CvResult {
        best_alpha: best.0,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_twelve_decades() {
        let g = default_alpha_grid();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], 1e-9);
        assert_eq!(g[11], 100.0);
    }

    #[test]
    fn one_alpha_is_selected_trivially() {
        let x = Matrix::from_rows(1, (0..20).map(|i| [i as f64])).unwrap();
        let y: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        let cv = CvConfig { alpha_grid: vec![0.3], ..Default::default() };
        assert_eq!(cross_validate(&x, &y, &cv, 1).unwrap().best_alpha, 0.3);
    }

    #[test]
    fn rejects_bad_configs() {
        let x = Matrix::zeros(3, 1);
        let y = [0.0; 3];
        let cv = CvConfig { folds: 5, ..Default::default() };
        assert!(matches!(cross_validate(&x, &y, &cv, 0), Err(ReadoutError::TooFewRows { .. })));
        let cv = CvConfig { folds: 1, ..Default::default() };
        assert!(matches!(cross_validate(&x, &y, &cv, 0), Err(ReadoutError::InvalidCv(_))));
        let cv = CvConfig { alpha_grid: vec![], folds: 2, ..Default::default() };
        assert!(matches!(cross_validate(&x, &y, &cv, 0), Err(ReadoutError::InvalidCv(_))));
        let cv = CvConfig { alpha_grid: vec![-1.0], folds: 2, ..Default::default() };
        assert!(matches!(cross_validate(&x, &y, &cv, 0), Err(ReadoutError::InvalidAlpha(_))));
    }

    #[test]
    fn ties_go_to_larger_alpha() {
        // Constant targets: every alpha predicts the mean exactly.
        let x = Matrix::from_rows(1, (0..10).map(|i| [i as f64])).unwrap();
        let y = [2.0; 10];
        let cv = CvConfig { alpha_grid: vec![1.0, 5.0, 0.5], folds: 2, standardize: false };
        assert_eq!(cross_validate(&x, &y, &cv, 3).unwrap().best_alpha, 5.0);
    }
}
