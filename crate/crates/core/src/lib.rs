//! Link-level simulation and channel estimation for RIS-assisted wideband
//! OFDM uplink with a moving UE.
//!
//! The crate is organised bottom-up:
//!
//! - [`config`]: scenario parameters, validation and the reference preset.
//! - [`channel`]: tapped-delay-line links, Doppler evolution, CIR/CFR transforms
//!   and the structured single-path (array factor) channel.
//! - [`signal`]: Zadoff-Chu pilots, RIS training patterns and the
//!   frequency-domain receive chain.
//! - [`estimators`]: cascaded CE without Doppler handling, Doppler shift
//!   adjustment (multi-path) and the four-pilot single-path estimator.
//! - [`metrics`]: strongest-tap reflection design, achievable rate and NMSE.
//! - [`harness`]: Monte-Carlo sweeps, CSV/manifest output and the CLI.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod metrics;
pub mod signal;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a power in dBm (or any dB quantity) to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
