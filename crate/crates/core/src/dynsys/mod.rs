//! Vector fields of the memristive oscillator and the Lorenz system, plus the
//! fixed-step integrator that drives them.

mod circuit;
mod forced;
mod lorenz;
pub mod ode;

pub use circuit::{
    circuit_rhs, memductance, normalize_components, Calibration, Channel, CircuitParams,
    CircuitState, ForcingSign, PhysicalComponents, CALIBRATED_FORCING_SIGN, CALIBRATED_OMEGA_PRIME,
};
pub use forced::PhaseLockedStepper;
pub use lorenz::{lorenz_rhs, LorenzParams, LorenzState};
pub use ode::{integrate, integrate_observed, march, rk4_step, TimeUnit, Trajectory};

/// Default RK4 resolution: steps per forcing period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("step size must be finite and positive, got {0}")]
    InvalidStep(f64),
    #[error("invalid integration interval [{t0}, {t1}]")]
    InvalidInterval { t0: f64, t1: f64 },
    #[error("integration diverged at t = {t}")]
    Diverged { t: f64 },
}

/// Integrates the oscillator over a physical-time trajectory.
///
/// Runs in the dimensionless frame with `steps_per_period` RK4 steps per
/// forcing period and rescales the result to volts (`v0`, `v1`) and seconds.
pub fn simulate_circuit(
    pc: &PhysicalComponents,
    cal: Calibration,
    initial: CircuitState,
    periods: usize,
    steps_per_period: usize,
) -> Result<Trajectory<2>, DynError> {
    let params = normalize_components(pc, cal.forcing_sign)?.with_calibration(cal);
    params.validate()?;
    let h = params.forcing_period() / steps_per_period as f64;
    let rhs = params.vector_field();
    let mut traj = Trajectory {
        t: Vec::with_capacity(periods * steps_per_period + 1),
        states: Vec::with_capacity(periods * steps_per_period + 1),
        unit: TimeUnit::Dimensionless,
    };
    march(&rhs, initial.into(), 0.0, h, periods * steps_per_period, |_, t, s| {
        traj.t.push(t);
        traj.states.push(*s);
    })?;
    Ok(traj.rescaled(pc.time_scale(), pc.voltage_scale(), TimeUnit::Seconds))
}
