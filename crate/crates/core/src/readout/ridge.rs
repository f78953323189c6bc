use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::Matrix;

use super::ReadoutError;

/// How the normal equations were solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Cholesky,
    /// Minimum-norm least squares; used when the penalized Gram matrix is
    /// not positive definite (rank-deficient features with zero penalty).
    LeastSquares,
}

/// Linear readout `ŷ = w·x + b`.
///
/// `weights` act on raw (unscaled) features. `scales` records the column
/// standard deviations used when the fit was done on standardized features
/// (all ones otherwise); they are informational once folded into `weights`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub reg_alpha: f64,
    pub scales: Vec<f64>,
    pub solver: Solver,
}

impl RidgeModel {
    pub fn width(&self) -> usize {
        self.weights.len()
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Centered normal equations of one training set, reusable across
/// regularization strengths.
#[derive(Debug, Clone)]
pub struct RidgeSystem {
    gram: DMatrix<f64>,
    rhs: DVector<f64>,
    x_mean: Vec<f64>,
    y_mean: f64,
    scales: Vec<f64>,
}

impl RidgeSystem {
    /// Accumulates `XcᵀXc` and `XcᵀYc` for mean-centered `x` and `y`. With
    /// `standardize`, columns are additionally divided by their standard
    /// deviation (constant columns keep scale 1).
    pub fn new(x: &Matrix, y: &[f64], standardize: bool) -> Result<Self, ReadoutError> {
        if x.rows() != y.len() {
            return Err(ReadoutError::DimensionMismatch {
                expected: x.rows(),
                got: y.len(),
            });
        }
        if x.rows() < 2 {
            return Err(ReadoutError::TooFewRows { needed: 2, got: x.rows() });
        }
        if x.as_slice().iter().chain(y).any(|v| !v.is_finite()) {
            return Err(ReadoutError::NonFinite);
        }
        let p = x.cols();
        let x_mean = x.column_means();
        let y_mean = y.iter().sum::<f64>() / y.len() as f64;

        let mut gram = DMatrix::<f64>::zeros(p, p);
        let mut rhs = DVector::<f64>::zeros(p);
        let mut centered = vec![0.0; p];
        for (row, &yi) in x.iter_rows().zip(y) {
            for j in 0..p {
                centered[j] = row[j] - x_mean[j];
            }
            let yc = yi - y_mean;
            for j in 0..p {
                let cj = centered[j];
                rhs[j] += cj * yc;
                for k in j..p {
                    gram[(j, k)] += cj * centered[k];
                }
            }
        }
        for j in 0..p {
            for k in 0..j {
                gram[(j, k)] = gram[(k, j)];
            }
        }

        let n = x.rows() as f64;
        let scales: Vec<f64> = if standardize {
            (0..p)
                .map(|j| {
                    let sd = (gram[(j, j)] / n).sqrt();
                    if sd > 1e-12 * (1.0 + x_mean[j].abs()) {
                        sd
                    } else {
                        1.0
                    }
                })
                .collect()
        } else {
            vec![1.0; p]
        };
        if standardize {
            for j in 0..p {
                rhs[j] /= scales[j];
                for k in 0..p {
                    gram[(j, k)] /= scales[j] * scales[k];
                }
            }
        }
        Ok(RidgeSystem {
            gram,
            rhs,
            x_mean,
            y_mean,
            scales,
        })
    }

    pub fn width(&self) -> usize {
        self.x_mean.len()
    }

    /// Solves `(G + αI)w = r` and folds scaling and centering back into a
    /// model on raw features.
    pub fn solve(&self, reg_alpha: f64) -> Result<RidgeModel, ReadoutError> {
        if !(reg_alpha >= 0.0) || !reg_alpha.is_finite() {
            return Err(ReadoutError::InvalidAlpha(reg_alpha));
        }
        let p = self.width();
        let mut a = self.gram.clone();
        for j in 0..p {
            a[(j, j)] += reg_alpha;
        }
        let (w_scaled, solver) = match a.clone().cholesky() {
            Some(ch) => (ch.solve(&self.rhs), Solver::Cholesky),
            None => {
                let svd = a.svd(true, true);
                let eps = f64::EPSILON * p as f64 * svd.singular_values.max();
                let w = svd.solve(&self.rhs, eps).map_err(|e| ReadoutError::Solve(e.to_string()))?;
                (w, Solver::LeastSquares)
            }
        };
        let weights: Vec<f64> = (0..p).map(|j| w_scaled[j] / self.scales[j]).collect();
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(ReadoutError::Solve("non-finite weights".into()));
        }
        let intercept = self.y_mean - weights.iter().zip(&self.x_mean).map(|(w, m)| w * m).sum::<f64>();
        Ok(RidgeModel {
            weights,
            intercept,
            reg_alpha,
            scales: self.scales.clone(),
            solver,
        })
    }
}

/// Ridge regression with an unpenalized intercept:
/// minimizes `Σᵢ (w·xᵢ + b − yᵢ)² + α‖w‖²`.
///
/// Columns and targets are centered, `(XcᵀXc + αI)w = XcᵀYc` is solved by
/// Cholesky and `b = ȳ − w·x̄`. If the system is not positive definite the
/// minimum-norm least-squares solution is used and `solver` says so.
pub fn fit_ridge(x: &Matrix, y: &[f64], reg_alpha: f64) -> Result<RidgeModel, ReadoutError> {
    RidgeSystem::new(x, y, false)?.solve(reg_alpha)
}

/// As [`fit_ridge`], with the penalty applied to unit-variance features.
pub fn fit_ridge_standardized(x: &Matrix, y: &[f64], reg_alpha: f64) -> Result<RidgeModel, ReadoutError> {
    RidgeSystem::new(x, y, true)?.solve(reg_alpha)
}

pub fn predict(model: &RidgeModel, x: &Matrix) -> Result<Vec<f64>, ReadoutError> {
    if x.cols() != model.width() {
        return Err(ReadoutError::WidthMismatch {
            expected: model.width(),
            got: x.cols(),
        });
    }
    Ok(x.iter_rows()
        .map(|r| model.intercept + r.iter().zip(&model.weights).map(|(a, w)| a * w).sum::<f64>())
        .collect())
}

/// Mean squared error.
pub fn mse(pred: &[f64], target: &[f64]) -> Result<f64, ReadoutError> {
    if pred.len() != target.len() {
        return Err(ReadoutError::DimensionMismatch {
            expected: target.len(),
            got: pred.len(),
        });
    }
    if pred.is_empty() {
        return Err(ReadoutError::Empty);
    }
    Ok(pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / pred.len() as f64)
}

/// Population variance.
pub fn variance(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
}
