//! Largest Lyapunov exponent by the two-trajectory (Benettin) method.
//!
//! A reference and a perturbed trajectory start `d0` apart. After every
//! forcing period the separation is measured, its log-stretch accumulated and
//! the perturbed state pulled back to distance `d0` along the current
//! separation direction. The separation is also renormalized mid-period if it
//! leaves `[d0·1e-100, d0·1e100]`, which keeps strongly contracting or slow
//! drives from underflowing. The exponent is the accumulated log-stretch over
//! the measured periods divided by the elapsed dimensionless time.

use serde::{Deserialize, Serialize};

use crate::dynsys::{
    normalize_components, rk4_step, Calibration, CircuitParams, CircuitState, DynError, PhaseLockedStepper,
    PhysicalComponents, DEFAULT_STEPS_PER_PERIOD,
};

use super::BifurcationError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSettings {
    /// Initial separation.
    pub d0: f64,
    pub transient_periods: usize,
    /// Periods over which log-stretch is averaged.
    pub periods: usize,
    pub steps_per_period: usize,
    pub initial: CircuitState,
}

impl Default for LyapunovSettings {
    fn default() -> Self {
        LyapunovSettings {
            d0: 1e-8,
            transient_periods: 200,
            periods: 500,
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            initial: CircuitState::default(),
        }
    }
}

impl LyapunovSettings {
    fn validate(&self) -> Result<(), BifurcationError> {
        if !(self.d0 > 0.0) || !self.d0.is_finite() {
            return Err(BifurcationError::InvalidSpec(format!("d0 must be positive, got {}", self.d0)));
        }
        if self.periods == 0 || self.steps_per_period == 0 {
            return Err(BifurcationError::InvalidSpec(
                "periods and steps_per_period must be positive".into(),
            ));
        }
        Ok(())
    }
}

const RESCALE_BAND: f64 = 1e100;

/// Shared Benettin loop over an arbitrary one-step map.
///
/// `step(n, s)` advances global step `n`; `observe(n, s)` sees the reference
/// state at every index, including the transient.
fn benettin<const N: usize, S, O>(
    mut step: S,
    s0: [f64; N],
    period: f64,
    settings: &LyapunovSettings,
    mut observe: O,
) -> Result<f64, BifurcationError>
where
    S: FnMut(usize, &[f64; N]) -> Result<[f64; N], DynError>,
    O: FnMut(usize, &[f64; N]),
{
    settings.validate()?;
    let d0 = settings.d0;
    let spp = settings.steps_per_period;
    let total_periods = settings.transient_periods + settings.periods;

    let mut reference = s0;
    let mut perturbed = s0;
    let lean = d0 / (N as f64).sqrt();
    for v in perturbed.iter_mut() {
        *v += lean;
    }

    let mut log_sum = 0.0;
    let mut measured = 0usize;
    let partial = |log_sum: f64, measured: usize| {
        (measured > 0).then(|| log_sum / (measured as f64 * period))
    };

    for p in 0..total_periods {
        let counting = p >= settings.transient_periods;
        let mut period_log = 0.0;
        for i in 0..spp {
            let n = p * spp + i;
            observe(n, &reference);
            let next_ref = step(n, &reference);
            let next_pert = step(n, &perturbed);
            let (next_ref, next_pert) = match (next_ref, next_pert) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(DynError::Diverged { t }), _) | (_, Err(DynError::Diverged { t })) => {
                    return Err(BifurcationError::LyapunovDiverged {
                        t,
                        partial: partial(log_sum, measured),
                    })
                }
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            };
            reference = next_ref;
            perturbed = next_pert;

            let d = distance(&reference, &perturbed);
            let end_of_period = i + 1 == spp;
            if end_of_period || d < d0 / RESCALE_BAND || d > d0 * RESCALE_BAND {
                if d == 0.0 || !d.is_finite() {
                    // Separation collapsed below representable precision.
                    period_log += f64::MIN_POSITIVE.ln() - d0.ln();
                    perturbed = reference;
                    perturbed[0] += d0;
                } else {
                    period_log += (d / d0).ln();
                    for k in 0..N {
                        perturbed[k] = reference[k] + (perturbed[k] - reference[k]) * (d0 / d);
                    }
                }
            }
        }
        if counting {
            log_sum += period_log;
            measured += 1;
        }
    }
    observe(total_periods * spp, &reference);
    Ok(log_sum / (measured as f64 * period))
}

fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Largest Lyapunov exponent (per unit dimensionless time) of the forced
/// oscillator with coefficients `params`, starting from `settings.initial`.
pub fn largest_lyapunov(params: &CircuitParams, settings: &LyapunovSettings) -> Result<f64, BifurcationError> {
    largest_lyapunov_observed(params, settings, |_, _| {})
}

/// As [`largest_lyapunov`], also streaming the reference trajectory to
/// `observe(step_index, state)`; used by sweeps to collect sections from the
/// same integration.
pub fn largest_lyapunov_observed<O>(
    params: &CircuitParams,
    settings: &LyapunovSettings,
    observe: O,
) -> Result<f64, BifurcationError>
where
    O: FnMut(usize, &[f64; 2]),
{
    let stepper = PhaseLockedStepper::new(*params, settings.steps_per_period)?;
    benettin(
        |n, s| stepper.step(n, s),
        settings.initial.into(),
        stepper.period(),
        settings,
        observe,
    )
}

/// Exponent at given component values and drive calibration.
pub fn lyapunov_at(
    pc: &PhysicalComponents,
    cal: Calibration,
    settings: &LyapunovSettings,
) -> Result<f64, BifurcationError> {
    let params = normalize_components(pc, cal.forcing_sign)?.with_calibration(cal);
    largest_lyapunov(&params, settings)
}

/// Benettin estimate for an arbitrary vector field `rhs(t, s)`, using
/// `period` as the renormalization interval. `settings.initial` is ignored in
/// favour of `s0`.
pub fn largest_lyapunov_of<const N: usize, F>(
    rhs: &F,
    s0: [f64; N],
    period: f64,
    settings: &LyapunovSettings,
) -> Result<f64, BifurcationError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(period > 0.0) {
        return Err(BifurcationError::InvalidSpec(format!("period must be positive, got {period}")));
    }
    let h = period / settings.steps_per_period as f64;
    let spp = settings.steps_per_period;
    benettin(
        |n, s| {
            let t = (n / spp) as f64 * period + (n % spp) as f64 * h;
            rk4_step(rhs, t, s, h)
        },
        s0,
        period,
        settings,
        |_, _| {},
    )
}
