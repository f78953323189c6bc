use std::f64::consts::TAU;

use super::{CircuitParams, DynError};

/// RK4 stepper for the oscillator with the step locked to the forcing period.
///
/// With `h = T / steps_per_period`, every RK4 stage falls on a multiple of
/// `h/2` within the period, so the drive `A′·sin(ω′t)` is read from a table
/// of `2·steps_per_period` entries instead of evaluating `sin` at large `t`.
#[derive(Debug, Clone)]
pub struct PhaseLockedStepper {
    params: CircuitParams,
    steps_per_period: usize,
    h: f64,
    drive: Vec<f64>,
}

impl PhaseLockedStepper {
    pub fn new(params: CircuitParams, steps_per_period: usize) -> Result<Self, DynError> {
        params.validate()?;
        if steps_per_period == 0 {
            return Err(DynError::InvalidParameter {
                name: "steps_per_period",
                value: 0.0,
            });
        }
        let half_steps = 2 * steps_per_period;
        let drive = (0..half_steps)
            .map(|j| params.a_prime * (TAU * j as f64 / half_steps as f64).sin())
            .collect();
        Ok(PhaseLockedStepper {
            params,
            steps_per_period,
            h: params.forcing_period() / steps_per_period as f64,
            drive,
        })
    }

    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    pub fn period(&self) -> f64 {
        self.params.forcing_period()
    }

    /// Dimensionless time of global step index `n`.
    pub fn time_of(&self, n: usize) -> f64 {
        let p = n / self.steps_per_period;
        let i = n % self.steps_per_period;
        p as f64 * self.period() + i as f64 * self.h
    }

    #[inline]
    fn field(&self, s: &[f64; 2], drive: f64) -> [f64; 2] {
        let p = &self.params;
        [
            -p.alpha * s[1] - s[0],
            p.forcing_sign.value() * p.beta * (drive - s[1]) + p.gamma * (1.0 - s[0] * s[0]) * s[1],
        ]
    }

    /// Advances one step starting at global step index `n`.
    #[inline]
    pub fn step(&self, n: usize, s: &[f64; 2]) -> Result<[f64; 2], DynError> {
        let i = n % self.steps_per_period;
        let d0 = self.drive[2 * i];
        let dm = self.drive[2 * i + 1];
        let d1 = self.drive[(2 * i + 2) % self.drive.len()];
        let h = self.h;
        let k1 = self.field(s, d0);
        let k2 = self.field(&[s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]], dm);
        let k3 = self.field(&[s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]], dm);
        let k4 = self.field(&[s[0] + h * k3[0], s[1] + h * k3[1]], d1);
        let out = [
            s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if out[0].is_finite() && out[1].is_finite() {
            Ok(out)
        } else {
            Err(DynError::Diverged { t: self.time_of(n) })
        }
    }

    /// Runs `n_steps` steps from global index `start`; `observe(n, s)` sees
    /// the state at every index `start..=start + n_steps`.
    pub fn run<O>(&self, start: usize, s0: [f64; 2], n_steps: usize, mut observe: O) -> Result<[f64; 2], DynError>
    where
        O: FnMut(usize, &[f64; 2]),
    {
        let mut s = s0;
        for n in start..start + n_steps {
            observe(n, &s);
            s = self.step(n, &s)?;
        }
        observe(start + n_steps, &s);
        Ok(s)
    }
}
