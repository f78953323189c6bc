use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynsys::{
    normalize_components, Calibration, Channel, CircuitState, PhaseLockedStepper, PhysicalComponents,
    DEFAULT_STEPS_PER_PERIOD,
};
use crate::tasks::affine;
use crate::Matrix;

use super::ReservoirError;

/// Fixed resistance of the amplitude-driven reservoir.
pub const A_RESERVOIR_BASE_R: f64 = 2.6e3;
/// Fixed amplitude of the resistance-driven reservoir.
pub const R_RESERVOIR_BASE_A: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReservoirConfig {
    pub channel: Channel,
    /// Working range, Ω or V depending on `channel`.
    pub x_min: f64,
    pub x_max: f64,
    /// Sampled forcing periods `N`.
    pub n_periods: usize,
    /// Samples per period `k`.
    pub samples_per_period: usize,
    /// Periods integrated and discarded after the reset, before sampling.
    pub transient_periods: usize,
    /// RK4 steps per forcing period; must be a multiple of `k`.
    pub steps_per_period: usize,
    pub reset_state: CircuitState,
    pub base: PhysicalComponents,
    pub calibration: Calibration,
}

impl ReservoirConfig {
    /// Defaults for a channel and working range: `N = 5`, `k = 10`, sampling
    /// from the reset state `(0, 0)` without washout. The fixed parameter is
    /// A = 2 V for an R-reservoir and R = 2.6 kΩ for an A-reservoir.
    pub fn new(channel: Channel, x_min: f64, x_max: f64) -> Self {
        let base = match channel {
            Channel::Resistance => PhysicalComponents {
                amplitude: R_RESERVOIR_BASE_A,
                ..Default::default()
            },
            Channel::Amplitude => PhysicalComponents {
                r: A_RESERVOIR_BASE_R,
                ..Default::default()
            },
        };
        ReservoirConfig {
            channel,
            x_min,
            x_max,
            n_periods: 5,
            samples_per_period: 10,
            transient_periods: 0,
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            reset_state: CircuitState::default(),
            base,
            calibration: Calibration::default(),
        }
    }

    /// Feature width `k·N`.
    pub fn width(&self) -> usize {
        self.n_periods * self.samples_per_period
    }

    pub fn validate(&self) -> Result<(), ReservoirError> {
        let bad = |m: String| Err(ReservoirError::InvalidConfig(m));
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return bad(format!("need x_min < x_max, got [{}, {}]", self.x_min, self.x_max));
        }
        if self.x_min <= 0.0 && self.channel == Channel::Resistance {
            return bad(format!("resistance range must be positive, got x_min = {}", self.x_min));
        }
        if self.x_min < 0.0 {
            return bad(format!("amplitude range must be non-negative, got x_min = {}", self.x_min));
        }
        if self.n_periods == 0 || self.samples_per_period == 0 {
            return bad("n_periods and samples_per_period must be at least 1".into());
        }
        if self.steps_per_period == 0 || !self.steps_per_period.is_multiple_of(self.samples_per_period) {
            return bad(format!(
                "steps_per_period ({}) must be a positive multiple of samples_per_period ({})",
                self.steps_per_period, self.samples_per_period
            ));
        }
        if !self.reset_state.x.is_finite() || !self.reset_state.y.is_finite() {
            return bad("reset state must be finite".into());
        }
        self.base.validate()?;
        Calibration::new(self.calibration.omega_prime, self.calibration.forcing_sign)?;
        Ok(())
    }
}

/// Physical parameter value for a normalized input:
/// `x_min + u·(x_max − x_min)`, returned exactly at both endpoints.
pub fn map_input(u: f64, cfg: &ReservoirConfig) -> Result<f64, ReservoirError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(ReservoirError::InputOutOfRange(u));
    }
    Ok(affine(u, cfg.x_min, cfg.x_max))
}

/// The `k·N` reservoir outputs for one input, in chronological order.
///
/// The sample at offset `j` of period `p` is `y` at time
/// `(transient + p + j/k)·T` after the reset, so the first sample of each
/// period sits at drive phase 0.
pub fn harvest(u: f64, cfg: &ReservoirConfig) -> Result<Vec<f64>, ReservoirError> {
    cfg.validate()?;
    harvest_unchecked(u, cfg)
}

fn harvest_unchecked(u: f64, cfg: &ReservoirConfig) -> Result<Vec<f64>, ReservoirError> {
    let value = map_input(u, cfg)?;
    let pc = cfg.base.with_channel(cfg.channel, value);
    let params = normalize_components(&pc, cfg.calibration.forcing_sign)?.with_calibration(cfg.calibration);
    let stepper = PhaseLockedStepper::new(params, cfg.steps_per_period)?;
    let spp = cfg.steps_per_period;
    let every = spp / cfg.samples_per_period;
    let start = cfg.transient_periods * spp;
    let s = stepper.run(0, cfg.reset_state.into(), start, |_, _| {})?;

    let mut out = Vec::with_capacity(cfg.width());
    stepper.run(start, s, cfg.n_periods * spp - 1, |n, s| {
        if (n - start).is_multiple_of(every) {
            out.push(s[1]);
        }
    })?;
    Ok(out)
}

/// Harvested features with the inputs that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub inputs: Vec<f64>,
    pub features: Matrix,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn width(&self) -> usize {
        self.features.cols()
    }
}

/// Row `i` is `harvest(inputs[i], cfg)`. Rows are computed in parallel.
pub fn build_features(inputs: &[f64], cfg: &ReservoirConfig) -> Result<FeatureMatrix, ReservoirError> {
    cfg.validate()?;
    if let Some(&u) = inputs.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(ReservoirError::InputOutOfRange(u));
    }
    let rows: Vec<Vec<f64>> = inputs
        .par_iter()
        .enumerate()
        .map(|(index, &u)| {
            harvest_unchecked(u, cfg).map_err(|e| match e {
                ReservoirError::Dyn(source) => ReservoirError::HarvestFailed { index, u, source },
                other => other,
            })
        })
        .collect::<Result<_, _>>()?;
    let features = Matrix::from_rows(cfg.width(), &rows).expect("harvest returns k·N samples");
    Ok(FeatureMatrix {
        inputs: inputs.to_vec(),
        features,
    })
}
