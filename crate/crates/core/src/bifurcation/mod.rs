//! Parameter sweeps, regime classification and drive calibration.

mod calibrate;
mod classify;
mod lyapunov;
mod sweep;

pub use calibrate::{
    calibrate_omega, candidate_grid, default_candidate_grid, evaluate_candidate, CalibrationReport,
    CalibrationSettings, CandidateOutcome, Landmark, LandmarkOutcome, DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MAX,
    DEFAULT_OMEGA_MIN, MIN_MATCHED_LANDMARKS,
};
pub use classify::{classify_regime, cluster_tolerance, count_clusters, ClassifySettings, Regime};
pub use lyapunov::{largest_lyapunov, largest_lyapunov_observed, largest_lyapunov_of, lyapunov_at, LyapunovSettings};
pub use sweep::{analyze_point, sweep, BifurcationScan, PointAnalysis, SectionMode, SweepSpec};

use crate::dynsys::DynError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BifurcationError {
    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),
    #[error("need at least {needed} section samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("trajectory diverged at t = {t} during Lyapunov estimation (partial estimate {partial:?})")]
    LyapunovDiverged { t: f64, partial: Option<f64> },
    #[error("calibration failed: best candidate matched {best} landmarks, need {required}\n{diagnostics}")]
    CalibrationFailed {
        best: usize,
        required: usize,
        diagnostics: String,
    },
    #[error(transparent)]
    Dyn(#[from] DynError),
}
