//! Linear readout: ridge regression, splitting, cross-validation and MSE.

mod cv;
mod model_file;
mod ridge;
mod split;

pub use cv::{cross_validate, default_alpha_grid, CvConfig, CvResult};
pub use model_file::{read_model, write_model};
pub use ridge::{fit_ridge, fit_ridge_standardized, mse, predict, variance, RidgeModel, RidgeSystem, Solver};
pub use split::{train_test_split, SplitPlan, DEFAULT_TRAIN_RATIO};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReadoutError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("feature width mismatch: model has {expected} weights, data has {got} columns")]
    WidthMismatch { expected: usize, got: usize },
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("empty input")]
    Empty,
    #[error("non-finite value in features or targets")]
    NonFinite,
    #[error("regularization strength must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error("train ratio {0} leaves an empty train or test set")]
    InvalidRatio(f64),
    #[error("invalid cross-validation config: {0}")]
    InvalidCv(String),
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("malformed model file: {0}")]
    ModelFormat(String),
}
