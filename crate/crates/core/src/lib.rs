//! Link-level simulator for a space-shift-keying (SSK) integrated sensing
//! and communication link between a LEO satellite and a ground station.
//!
//! The communication side maps bit groups to active transmit antennas,
//! pushes them through a shadowed-Rician MIMO channel and recovers them with
//! a maximum-likelihood detector. The sensing side synthesizes FMCW echoes
//! of a debris target, dechirps them, and recovers range and radial velocity
//! from the beat frequencies of a triangle-LFM pulse.
//!
//! Signal math is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root pin the common types to `f64`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod radar;
pub mod receiver;
mod scalar;
pub mod ssk;
pub mod waveforms;

pub use error::{Error, Result};
pub use scalar::Real;

/// Speed of light used throughout, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

pub type Complex64 = num_complex::Complex<f64>;
pub type Waveform = waveforms::SampledWaveform<f64>;
pub type Ambiguity = waveforms::AmbiguitySurface<f64>;
pub type Geometry = channel::LinkGeometry<f64>;
pub type Budget = channel::LinkBudget<f64>;
pub type Channel = channel::ChannelRealization<f64>;
pub type Detection = receiver::DetectionResult<f64>;
pub type Scene<'a> = radar::RadarScene<'a, f64>;
pub type Estimate = radar::RadarEstimate<f64>;
pub type Threshold = radar::DetectionThreshold<f64>;
pub type Spectral = numerics::SpectralEstimate<f64>;
