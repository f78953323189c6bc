use serde::{Deserialize, Serialize};

use super::DynError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
}

impl Default for LorenzParams {
    /// σ = 10, ρ = 28, β = 2.667.
    fn default() -> Self {
        LorenzParams {
            sigma: 10.0,
            rho: 28.0,
            beta: 2.667,
        }
    }
}

impl LorenzParams {
    pub fn validate(&self) -> Result<(), DynError> {
        for (name, value) in [("sigma", self.sigma), ("rho", self.rho), ("beta", self.beta)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DynError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    pub fn vector_field(self) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Copy {
        move |_t, s| {
            let d = lorenz_rhs(LorenzState { x: s[0], y: s[1], z: s[2] }, &self);
            [d.x, d.y, d.z]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorenzState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LorenzState {
    /// Initial condition (0.5, 1, 2) used for the approximation task.
    pub const TASK_INITIAL: LorenzState = LorenzState { x: 0.5, y: 1.0, z: 2.0 };
}

impl From<LorenzState> for [f64; 3] {
    fn from(s: LorenzState) -> Self {
        [s.x, s.y, s.z]
    }
}

impl From<[f64; 3]> for LorenzState {
    fn from(s: [f64; 3]) -> Self {
        LorenzState { x: s[0], y: s[1], z: s[2] }
    }
}

#[inline]
pub fn lorenz_rhs(s: LorenzState, p: &LorenzParams) -> LorenzState {
    LorenzState {
        x: p.sigma * (s.y - s.x),
        y: p.rho * s.x - s.y - s.x * s.z,
        z: s.x * s.y - p.beta * s.z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_at_task_initial_condition() {
        let d = lorenz_rhs(LorenzState::TASK_INITIAL, &LorenzParams::default());
        assert_eq!((d.x, d.y, d.z), (5.0, 12.0, -4.834));
    }

    #[test]
    fn origin_is_fixed() {
        let d = lorenz_rhs(LorenzState::default(), &LorenzParams::default());
        assert_eq!(d, LorenzState::default());
    }

    #[test]
    fn y_derivative_vanishes_on_fixed_point_relation() {
        let d = lorenz_rhs(LorenzState { x: 1.0, y: 1.0, z: 27.0 }, &LorenzParams::default());
        assert_eq!(d.y, 0.0);
        assert_eq!(d.x, 0.0);
    }

    #[test]
    fn rejects_non_positive_params() {
        assert!(LorenzParams { rho: 0.0, ..Default::default() }.validate().is_err());
        assert!(LorenzParams::default().validate().is_ok());
    }
}
