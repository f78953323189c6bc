//! The forced second-order memristive oscillator.
//!
//! Physical model, in volts and seconds:
//!
//! ```text
//! dv1/dt = (vs - v1)/(R·C1) + (1 - g·v0²)·v1/(R3·C1)
//! dv0/dt = -v1/(R1·C0) - v0/(R2·C0)
//! vs     = A·sin(2πν·t)
//! ```
//!
//! Integration happens in the dimensionless frame
//!
//! ```text
//! ẋ = -α·y - x
//! ẏ = s·β·(A′·sin(ω′t) - y) + γ·(1 - x²)·y
//! ```
//!
//! with `x = v0·√g`, `y = v1·√g`, `t = t_phys/(R2·C0)`, `α = R2/R1`,
//! `β = R2·C0/(R·C1)`, `γ = R2·C0/(R3·C1)`, `A′ = A·√g`, `ω′ = 2πν·R2·C0`.
//! The sign `s` of the β-term is configurable: the normalized form is usually
//! quoted with `s = -1`, while rescaling the physical equations directly
//! gives `s = +1`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::DynError;

/// Dimensionless forcing frequency selected by calibration against the
/// periodic/chaotic landmarks of the R sweep at A = 2 V (P1 @ 1.9 kΩ,
/// chaos @ 2.1 kΩ, P3 @ 2.3 kΩ, chaos @ 2.7 kΩ).
pub const CALIBRATED_OMEGA_PRIME: f64 = 0.8107267590408679;

/// Sign of the β-term accompanying [`CALIBRATED_OMEGA_PRIME`].
pub const CALIBRATED_FORCING_SIGN: ForcingSign = ForcingSign::Plus;

/// Sign multiplying `β·(A′·sin(ω′t) − y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum ForcingSign {
    Plus,
    Minus,
}

impl ForcingSign {
    pub fn value(self) -> f64 {
        match self {
            ForcingSign::Plus => 1.0,
            ForcingSign::Minus => -1.0,
        }
    }
}

impl Default for ForcingSign {
    /// The sign as the normalized equations are usually printed.
    fn default() -> Self {
        ForcingSign::Minus
    }
}

impl TryFrom<i8> for ForcingSign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(ForcingSign::Plus),
            -1 => Ok(ForcingSign::Minus),
            other => Err(format!("forcing sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<ForcingSign> for i8 {
    fn from(s: ForcingSign) -> i8 {
        match s {
            ForcingSign::Plus => 1,
            ForcingSign::Minus => -1,
        }
    }
}

impl std::fmt::Display for ForcingSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ForcingSign::Plus => "+1",
            ForcingSign::Minus => "-1",
        })
    }
}

/// The drive settings that the circuit description leaves open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub omega_prime: f64,
    pub forcing_sign: ForcingSign,
}

impl Calibration {
    pub fn new(omega_prime: f64, forcing_sign: ForcingSign) -> Result<Self, DynError> {
        if !(omega_prime > 0.0) || !omega_prime.is_finite() {
            return Err(DynError::InvalidParameter {
                name: "omega_prime",
                value: omega_prime,
            });
        }
        Ok(Calibration {
            omega_prime,
            forcing_sign,
        })
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            omega_prime: CALIBRATED_OMEGA_PRIME,
            forcing_sign: CALIBRATED_FORCING_SIGN,
        }
    }
}

/// Which circuit hyperparameter an input or sweep acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    /// Series resistance R (Ω), entering through β.
    #[serde(rename = "R")]
    Resistance,
    /// Forcing amplitude A (V), entering through A′.
    #[serde(rename = "A")]
    Amplitude,
}

impl Channel {
    pub fn unit(self) -> &'static str {
        match self {
            Channel::Resistance => "ohm",
            Channel::Amplitude => "V",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Channel::Resistance => "R",
            Channel::Amplitude => "A",
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" | "resistance" => Ok(Channel::Resistance),
            "A" | "a" | "amplitude" => Ok(Channel::Amplitude),
            other => Err(format!("unknown channel `{other}` (expected R or A)")),
        }
    }
}

/// Component values of the physical circuit, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalComponents {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub c0: f64,
    pub c1: f64,
    pub g: f64,
    pub amplitude: f64,
    pub nu: f64,
}

impl Default for PhysicalComponents {
    /// R1 = 8 kΩ, R2 = 4 kΩ, R3 = 1.4 kΩ, C0 = 4.7 nF, C1 = 6.8 nF, g = 0.1,
    /// with R = 2.1 kΩ, A = 2 V and ν matching the calibrated ω′.
    fn default() -> Self {
        let r2 = 4.0e3;
        let c0 = 4.7e-9;
        PhysicalComponents {
            r: 2.1e3,
            r1: 8.0e3,
            r2,
            r3: 1.4e3,
            c0,
            c1: 6.8e-9,
            g: 0.1,
            amplitude: 2.0,
            nu: CALIBRATED_OMEGA_PRIME / (TAU * r2 * c0),
        }
    }
}

impl PhysicalComponents {
    pub fn validate(&self) -> Result<(), DynError> {
        let checks = [
            ("R", self.r),
            ("R1", self.r1),
            ("R2", self.r2),
            ("R3", self.r3),
            ("C0", self.c0),
            ("C1", self.c1),
            ("g", self.g),
            ("nu", self.nu),
        ];
        for (name, value) in checks {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DynError::InvalidParameter { name, value });
            }
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return Err(DynError::InvalidParameter {
                name: "A",
                value: self.amplitude,
            });
        }
        Ok(())
    }

    /// Copy with the given channel set to `value` (Ω for R, V for A).
    pub fn with_channel(mut self, channel: Channel, value: f64) -> Self {
        match channel {
            Channel::Resistance => self.r = value,
            Channel::Amplitude => self.amplitude = value,
        }
        self
    }

    pub fn channel_value(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Resistance => self.r,
            Channel::Amplitude => self.amplitude,
        }
    }

    /// Seconds per unit of dimensionless time (`R2·C0`).
    pub fn time_scale(&self) -> f64 {
        self.r2 * self.c0
    }

    /// Volts per unit of dimensionless voltage (`1/√g`).
    pub fn voltage_scale(&self) -> f64 {
        1.0 / self.g.sqrt()
    }
}

/// Coefficients of the dimensionless oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a_prime: f64,
    pub omega_prime: f64,
    pub forcing_sign: ForcingSign,
}

impl CircuitParams {
    /// Replaces ω′ and the β-term sign with calibrated values.
    pub fn with_calibration(mut self, cal: Calibration) -> Self {
        self.omega_prime = cal.omega_prime;
        self.forcing_sign = cal.forcing_sign;
        self
    }

    /// Forcing period in dimensionless time.
    pub fn forcing_period(&self) -> f64 {
        TAU / self.omega_prime
    }

    pub fn validate(&self) -> Result<(), DynError> {
        let checks = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("omega_prime", self.omega_prime),
        ];
        for (name, value) in checks {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DynError::InvalidParameter { name, value });
            }
        }
        if !(self.a_prime >= 0.0) || !self.a_prime.is_finite() {
            return Err(DynError::InvalidParameter {
                name: "a_prime",
                value: self.a_prime,
            });
        }
        Ok(())
    }

    /// The vector field as a closure over `(t, [x, y])`.
    pub fn vector_field(self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + Copy {
        move |t, s| {
            let d = circuit_rhs(CircuitState { x: s[0], y: s[1] }, t, &self);
            [d.x, d.y]
        }
    }
}

/// Dimensionless oscillator state: `x = v0·√g`, `y = v1·√g`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitState {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for CircuitState {
    fn from(s: [f64; 2]) -> Self {
        CircuitState { x: s[0], y: s[1] }
    }
}

impl From<CircuitState> for [f64; 2] {
    fn from(s: CircuitState) -> Self {
        [s.x, s.y]
    }
}

/// Maps component values onto the dimensionless coefficients.
pub fn normalize_components(
    pc: &PhysicalComponents,
    forcing_sign: ForcingSign,
) -> Result<CircuitParams, DynError> {
    pc.validate()?;
    let tau = pc.r2 * pc.c0;
    Ok(CircuitParams {
        alpha: pc.r2 / pc.r1,
        beta: tau / (pc.r * pc.c1),
        gamma: tau / (pc.r3 * pc.c1),
        a_prime: pc.amplitude * pc.g.sqrt(),
        omega_prime: TAU * pc.nu * tau,
        forcing_sign,
    })
}

/// Time derivative of the dimensionless oscillator.
#[inline]
pub fn circuit_rhs(s: CircuitState, t: f64, p: &CircuitParams) -> CircuitState {
    let drive = p.a_prime * (p.omega_prime * t).sin();
    CircuitState {
        x: -p.alpha * s.y - s.x,
        y: p.forcing_sign.value() * p.beta * (drive - s.y) + p.gamma * (1.0 - s.x * s.x) * s.y,
    }
}

/// Memductance `W(v0) = -(1/R3)·(1 - g·v0²)` in siemens.
pub fn memductance(v0: f64, g: f64, r3: f64) -> f64 {
    -(1.0 - g * v0 * v0) / r3
}
