use serde::{Deserialize, Serialize};

use super::BifurcationError;

/// Dynamical regime at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Regime {
    /// Stroboscopic section collapses onto `period` points.
    Periodic { period: u32 },
    Chaotic,
    /// Integration blew up before the section could be recorded.
    Diverged,
}

impl Regime {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Regime::Periodic { .. })
    }

    pub fn is_chaotic(&self) -> bool {
        matches!(self, Regime::Chaotic)
    }

    pub fn period(&self) -> Option<u32> {
        match self {
            Regime::Periodic { period } => Some(*period),
            _ => None,
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Periodic { period } => write!(f, "periodic({period})"),
            Regime::Chaotic => f.write_str("chaotic"),
            Regime::Diverged => f.write_str("diverged"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifySettings {
    pub max_period: u32,
    /// Cluster tolerance as a fraction of the sample range.
    pub relative_tolerance: f64,
    /// Exponents above this count as chaotic.
    pub lyap_threshold: f64,
    pub min_samples: usize,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        ClassifySettings {
            max_period: 16,
            relative_tolerance: 1e-3,
            lyap_threshold: 1e-3,
            min_samples: 32,
        }
    }
}

/// Number of clusters in the multiset `samples` at tolerance `tol`: sorted
/// values are split wherever consecutive gaps exceed `tol`.
pub fn count_clusters(samples: &[f64], tol: f64) -> usize {
    if samples.is_empty() {
        return 0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// Clustering tolerance for a section: `relative_tolerance·range` plus an
/// absolute floor of `1e-9·(1 + max|s|)` so a period-1 section, whose range
/// is pure rounding noise, still forms one cluster.
pub fn cluster_tolerance(samples: &[f64], relative_tolerance: f64) -> f64 {
    let (lo, hi, amax) = samples.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64),
        |(lo, hi, amax), &v| (lo.min(v), hi.max(v), amax.max(v.abs())),
    );
    relative_tolerance * (hi - lo) + 1e-9 * (1.0 + amax)
}

/// Labels a stroboscopic section.
///
/// Periodic(p) when the samples fall into `p ≤ max_period` clusters and the
/// exponent does not exceed `lyap_threshold`; chaotic otherwise. Borderline
/// cases therefore land on chaotic.
pub fn classify_regime(samples: &[f64], lyap: f64, settings: &ClassifySettings) -> Result<Regime, BifurcationError> {
    if samples.len() < settings.min_samples {
        return Err(BifurcationError::InsufficientData {
            needed: settings.min_samples,
            got: samples.len(),
        });
    }
    if samples.iter().any(|v| !v.is_finite()) || lyap.is_nan() {
        return Ok(Regime::Chaotic);
    }
    let tol = cluster_tolerance(samples, settings.relative_tolerance);
    let clusters = count_clusters(samples, tol);
    if clusters as u32 <= settings.max_period && lyap <= settings.lyap_threshold {
        Ok(Regime::Periodic { period: clusters as u32 })
    } else {
        Ok(Regime::Chaotic)
    }
}
