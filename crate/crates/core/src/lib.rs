//! Single-node physical reservoir computing on a forced memristive chaotic
//! oscillator.
//!
//! The crate is organised bottom-up:
//!
//! * [`dynsys`]: oscillator and Lorenz vector fields, fixed-step RK4.
//! * [`bifurcation`]: parameter sweeps, Lyapunov exponents, regime labels and
//!   calibration of the drive frequency.
//! * [`reservoir`]: maps a scalar input onto R or A, resets the circuit and
//!   harvests `k·N` time-multiplexed samples as features.
//! * [`readout`]: ridge regression, k-fold cross-validation, splitting, MSE.
//! * [`tasks`]: the polynomial and Lorenz target datasets.
//!
//! ```
//! use memres::dynsys::{normalize_components, ForcingSign, PhysicalComponents};
//!
//! let p = normalize_components(&PhysicalComponents::default(), ForcingSign::Plus).unwrap();
//! assert_eq!(p.alpha, 0.5);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod dynsys;
pub mod matrix;
pub mod readout;
pub mod reservoir;
pub mod tasks;

pub use matrix::Matrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/circuit.md")]
    mod circuit {}
    #[doc = include_str!("../../../book/src/bifurcation.md")]
    mod bifurcation {}
    #[doc = include_str!("../../../book/src/reservoir.md")]
    mod reservoir {}
    #[doc = include_str!("../../../book/src/readout.md")]
    mod readout {}
    #[doc = include_str!("../../../book/src/tasks.md")]
    mod tasks {}
}
