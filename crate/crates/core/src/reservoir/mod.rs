//! Single-node, time-multiplexed reservoir.
//!
//! A normalized input `u ∈ [0, 1]` sets one circuit hyperparameter (R or A)
//! inside a working range. The circuit is reset to a fixed state, driven for
//! `N` forcing periods, and `y` is sampled at `k` phase-locked instants per
//! period, giving `k·N` features per input.

mod cache;
mod harvest;

pub use cache::{cache_key, FeatureCache, CacheMeta};
pub use harvest::{build_features, harvest, map_input, FeatureMatrix, ReservoirConfig, A_RESERVOIR_BASE_R, R_RESERVOIR_BASE_A};

use crate::dynsys::DynError;

#[derive(Debug, thiserror::Error)]
pub enum ReservoirError {
    #[error("input u = {0} is outside [0, 1]")]
    InputOutOfRange(f64),
    #[error("invalid reservoir config: {0}")]
    InvalidConfig(String),
    #[error("harvest failed for input {index} (u = {u}): {source}")]
    HarvestFailed {
        index: usize,
        u: f64,
        #[source]
        source: DynError,
    },
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error("feature cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
