//! Guiding-vector-field path following for constant-airspeed vehicles under wind.
//!
//! Given a desired path described as the zero level set of a C² implicit
//! function `phi`, this crate builds a guidance vector field whose integral
//! curves converge to the path, derives the course rate that keeps a vehicle
//! locked onto the field, and turns both into a yaw-rate command (and the
//! equivalent coordinated-turn bank angle) for a constant-airspeed
//! nonholonomic vehicle flying through wind.
//!
//! The pieces map onto modules:
//!
//! - [`curve`] — implicit curves (`phi`, gradient, Hessian), shipped line /
//!   circle / rotated-ellipse constructors, and finite-difference validation
//!   of user-supplied derivatives.
//! - [`gvf`] — the guidance field `ṗ_d = τ − k_e·e·n`, the desired course
//!   rate, the yaw-rate control law, sideslip, bank/yaw-rate conversions and
//!   an offline bank-constraint tuning check.
//! - [`sim`] — closed-loop kinematic simulation of the unicycle-with-wind
//!   model under the controller, with RK4 integration and zero-order hold
//!   between controller updates.
//! - [`analysis`] — Lyapunov values and convergence diagnostics over
//!   trajectory logs.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only switches scalar math from `libm` to the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod curve;
pub mod gvf;
pub mod math;
pub mod rng;
pub mod sim;

pub use math::{Aabb, Mat2, Vec2};

/// Standard gravity, m/s².
pub const GRAVITY_MPS2: f64 = 9.80665;

/// Errors shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A gain that must be strictly positive was not.
    NonPositiveGain,
    /// A length (radius, semi-axis) that must be strictly positive was not.
    NonPositiveAxis,
    /// A step size (finite-difference step, integrator dt) must be positive.
    NonPositiveStep,
    /// An input that must be finite was NaN or infinite.
    NonFiniteInput,
    /// The guidance field vanished (critical point of `phi`).
    DegenerateField,
    /// Ground speed below the usable threshold.
    ZeroGroundSpeed,
    /// Airspeed must be strictly positive.
    NonPositiveAirspeed,
    /// Pitch must lie strictly inside (-pi/2, pi/2).
    PitchOutOfRange,
    /// Bank angle must lie strictly inside (-pi/2, pi/2) and limits must be positive.
    BankOutOfRange,
    /// A vector that must be unit length was not (within tolerance).
    NotUnitVector,
    /// Trajectory log too short to analyze.
    LogTooShort,
    /// Band sampling produced no usable points.
    EmptySampleSet,
    /// Requested band exceeds the curve's regularity bound `c_star`.
    BandExceedsRegularity,
    /// Wind bound must be strictly below airspeed.
    WindExceedsAirspeed,
    /// A configuration value failed validation.
    InvalidConfig(&'static str),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::NonPositiveGain => write!(f, "gains k_e and k_d must be strictly positive"),
            Error::NonPositiveAxis => write!(f, "lengths must be strictly positive"),
            Error::NonPositiveStep => write!(f, "step size must be strictly positive"),
            Error::NonFiniteInput => write!(f, "input must be finite"),
            Error::DegenerateField => write!(f, "guidance field vanished (critical point)"),
            Error::ZeroGroundSpeed => write!(f, "ground speed too small to define a course"),
            Error::NonPositiveAirspeed => write!(f, "airspeed must be strictly positive"),
            Error::PitchOutOfRange => write!(f, "pitch must lie strictly inside (-pi/2, pi/2)"),
            Error::BankOutOfRange => {
                write!(f, "bank must lie strictly inside (-pi/2, pi/2), limits positive")
            }
            Error::NotUnitVector => write!(f, "vector must be unit length"),
            Error::LogTooShort => write!(f, "trajectory log must contain at least 3 samples"),
            Error::EmptySampleSet => write!(f, "no usable sample points in the requested band"),
            Error::BandExceedsRegularity => {
                write!(f, "band exceeds the curve's regularity bound c_star")
            }
            Error::WindExceedsAirspeed => {
                write!(f, "wind speed bound must be strictly less than airspeed")
            }
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
