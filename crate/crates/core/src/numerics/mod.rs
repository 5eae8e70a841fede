//! Shared mathematical primitives: Gaussian tail functions, random
//! samplers, and single/few-tone frequency estimators.

mod distributions;
mod music;
mod rng;
mod special;
mod spectral;

pub use distributions::{complex_gaussian, sample_nakagami, sample_phase, sample_rayleigh};
pub use music::{root_music_frequencies, root_music_with_order, MIN_CORRELATION_ORDER};
pub use rng::{stream_id, RngStream};
pub use special::{inv_q_function, q_function};
pub use spectral::{fft_bin_width, fft_peak_frequency, SpectralEstimate, SpectralMethod};

#[cfg(test)]
pub(crate) use distributions::tests::ks_statistic;
