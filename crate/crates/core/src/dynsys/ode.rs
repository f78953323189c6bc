//! Fixed-step classical Runge–Kutta integration.
//!
//! States are plain `[f64; N]` arrays so the same stepper drives the
//! two-dimensional oscillator, the three-dimensional Lorenz flow and the
//! four-dimensional reference/perturbed pair used for Lyapunov estimates.
//! Every routine is a pure function of its arguments; identical inputs give
//! bit-identical outputs.

use serde::{Deserialize, Serialize};

use super::DynError;

/// Unit attached to the time stamps of a [`Trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeUnit {
    Dimensionless,
    Seconds,
}

/// Time-stamped states produced by [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub unit: TimeUnit,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64; N])> {
        Some((*self.t.last()?, self.states.last()?))
    }

    /// Rescales time stamps and states, e.g. dimensionless → physical units.
    pub fn rescaled(&self, time_scale: f64, state_scale: f64, unit: TimeUnit) -> Self {
        Trajectory {
            t: self.t.iter().map(|t| t * time_scale).collect(),
            states: self
                .states
                .iter()
                .map(|s| s.map(|v| v * state_scale))
                .collect(),
            unit,
        }
    }
}

#[inline]
fn axpy<const N: usize>(s: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *s;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

/// One classical RK4 step of size `h` from `(t, s)`.
///
/// `rhs(t, s)` returns the time derivative. A non-finite stage or result is
/// reported as [`DynError::Diverged`] carrying `t`.
pub fn rk4_step<const N: usize, F>(rhs: &F, t: f64, s: &[f64; N], h: f64) -> Result<[f64; N], DynError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(DynError::InvalidStep(h));
    }
    let half = 0.5 * h;
    let k1 = rhs(t, s);
    let k2 = rhs(t + half, &axpy(s, half, &k1));
    let k3 = rhs(t + half, &axpy(s, half, &k2));
    let k4 = rhs(t + h, &axpy(s, h, &k3));
    let mut out = *s;
    for i in 0..N {
        let incr = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        if !incr.is_finite() {
            return Err(DynError::Diverged { t });
        }
        out[i] += h / 6.0 * incr;
    }
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(DynError::Diverged { t })
    }
}

/// Integrates from `t0` to `t1` with step `h`, recording every step.
///
/// Step `i` starts at `t0 + i·h` (computed by multiplication, not by
/// accumulation); the last step is shortened so the trajectory ends exactly
/// at `t1`. The initial state is included, so `t1 == t0` yields a
/// single-entry trajectory.
pub fn integrate<const N: usize, F>(
    rhs: &F,
    s0: [f64; N],
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<Trajectory<N>, DynError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut traj = Trajectory {
        t: vec![t0],
        states: vec![s0],
        unit: TimeUnit::Dimensionless,
    };
    integrate_observed(rhs, s0, t0, t1, h, |t, s| {
        traj.t.push(t);
        traj.states.push(*s);
    })?;
    Ok(traj)
}

/// Same stepping rule as [`integrate`] but hands each new `(t, state)` to
/// `observe` instead of storing it. Returns the final state.
pub fn integrate_observed<const N: usize, F, O>(
    rhs: &F,
    s0: [f64; N],
    t0: f64,
    t1: f64,
    h: f64,
    mut observe: O,
) -> Result<[f64; N], DynError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(DynError::InvalidStep(h));
    }
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(DynError::InvalidInterval { t0, t1 });
    }
    let n_steps = step_count(t1 - t0, h);
    let mut s = s0;
    for i in 0..n_steps {
        let t = t0 + i as f64 * h;
        let t_next = if i + 1 == n_steps { t1 } else { t0 + (i + 1) as f64 * h };
        s = rk4_step(rhs, t, &s, t_next - t)?;
        observe(t_next, &s);
    }
    Ok(s)
}

/// Number of steps of size `h` needed to cover `span`; a trailing remainder
/// shorter than `1e-9·h` is absorbed into the previous step.
fn step_count(span: f64, h: f64) -> usize {
    if span <= 0.0 {
        return 0;
    }
    let raw = span / h;
    let rounded = raw.round();
    if (raw - rounded).abs() <= 1e-9 * raw.max(1.0) {
        rounded.max(1.0) as usize
    } else {
        raw.ceil() as usize
    }
}

/// Advances `n_steps` uniform steps of size `h` starting at `t0`, with
/// `observe(i, t_i, s_i)` called before each step and once more after the
/// last one (`i == n_steps`). This is the loop used for phase-locked
/// sampling, where step boundaries must land on exact sub-period offsets.
pub fn march<const N: usize, F, O>(
    rhs: &F,
    s0: [f64; N],
    t0: f64,
    h: f64,
    n_steps: usize,
    mut observe: O,
) -> Result<[f64; N], DynError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(usize, f64, &[f64; N]),
{
    let mut s = s0;
    for i in 0..n_steps {
        let t = t0 + i as f64 * h;
        observe(i, t, &s);
        s = rk4_step(rhs, t, &s, h)?;
    }
    observe(n_steps, t0 + n_steps as f64 * h, &s);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(_t: f64, s: &[f64; 1]) -> [f64; 1] {
        [-s[0]]
    }

    #[test]
    fn single_step_matches_hand_expanded_tableau() {
        // k1=-1, k2=-0.95, k3=-0.9525, k4=-0.90475
        // y1 = 1 + 0.1/6·(-1 - 1.9 - 1.905 - 0.90475) = 0.9048375
        let y = rk4_step(&decay, 0.0, &[1.0], 0.1).unwrap();
        assert!((y[0] - 0.904_837_5).abs() < 1e-12);
        assert!((y[0] - (-0.1f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn zero_and_negative_steps_are_rejected() {
        assert!(matches!(rk4_step(&decay, 0.0, &[1.0], 0.0), Err(DynError::InvalidStep(_))));
        assert!(matches!(rk4_step(&decay, 0.0, &[1.0], -0.1), Err(DynError::InvalidStep(_))));
        assert!(integrate(&decay, [1.0], 0.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn empty_interval_keeps_initial_state() {
        let tr = integrate(&decay, [3.0], 2.0, 2.0, 0.1).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.states[0], [3.0]);
        assert!(matches!(
            integrate(&decay, [3.0], 2.0, 1.0, 0.1),
            Err(DynError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn trajectory_ends_exactly_at_t1() {
        let tr = integrate(&decay, [1.0], 0.0, 1.0, 0.3).unwrap();
        assert_eq!(*tr.t.last().unwrap(), 1.0);
        assert_eq!(tr.len(), 5);
        assert!(tr.t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exponential_decay_to_unit_time() {
        let tr = integrate(&decay, [1.0], 0.0, 1.0, 1e-3).unwrap();
        let (t, s) = tr.last().unwrap();
        assert_eq!(t, 1.0);
        assert!((s[0] - (-1f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_returns_after_one_period() {
        let rhs = |_t: f64, s: &[f64; 2]| [s[1], -s[0]];
        let h = std::f64::consts::TAU / 1000.0;
        let end = march(&rhs, [1.0, 0.0], 0.0, h, 1000, |_, _, _| {}).unwrap();
        assert!((end[0] - 1.0).abs() < 1e-6 && end[1].abs() < 1e-6);
    }

    #[test]
    fn blow_up_reports_divergence_time() {
        let rhs = |_t: f64, s: &[f64; 1]| [s[0] * s[0]];
        match integrate(&rhs, [1.0], 0.0, 2.0, 0.01) {
            Err(DynError::Diverged { t }) => assert!(t > 0.9 && t < 2.0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn march_observes_every_boundary() {
        let mut seen = Vec::new();
        march(&decay, [1.0], 0.0, 0.25, 4, |i, t, _| seen.push((i, t))).unwrap();
        assert_eq!(seen, vec![(0, 0.0), (1, 0.25), (2, 0.5), (3, 0.75), (4, 1.0)]);
    }
}
