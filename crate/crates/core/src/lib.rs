//! Two-mode field dynamics driven by a pumped double-Λ medium.
//!
//! The pipeline runs from the pump-only steady state of the atoms
//! ([`pump`]), through the gain and coupling rates of the reduced field
//! master equation ([`coefficients`]), to the closed moment equations
//! ([`moments`], [`integrate`]). [`analytic`] and [`fock`] provide
//! independent references for the limiting regimes and for arbitrary rates.

pub mod analytic;
pub mod coefficients;
pub mod error;
pub mod fock;
pub mod integrate;
pub mod moments;
pub mod parallel;
pub mod params;
pub mod pump;

pub use coefficients::{
    classify_regime, coefficients_for, drift_matrix, gain_coefficients, GainCoefficients, RegimeTag,
};
pub use error::{Error, Result};
pub use integrate::{integrate, IntegrateOptions, Trajectory, WitnessSample};
pub use moments::{entanglement_witness, initial_moments_coherent, initial_moments_fock, MomentState};
pub use parallel::Exec;
pub use params::{PumpParams, SystemParams};
pub use pump::{pump_steady_state_closed_form, pump_steady_state_numeric, PumpSteadyState};
