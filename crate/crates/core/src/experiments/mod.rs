//! Monte Carlo harness: BER sweeps, sensing-accuracy sweeps, and the
//! link-budget and ambiguity reports, all driven by [`ExperimentConfig`].

mod ber;
mod config;
mod reports;
mod sensing;

pub use ber::{noise_variance, run_ber_curve, run_ber_sweep, simulate_ber_point, symbol_pulse, BerCurve, BerPoint};
pub use config::{AmbiguityGrid, ExperimentConfig, WaveformChoice, Weighting};
pub use reports::{ambiguity_pulse, run_ambiguity, run_link_budget, write_ambiguity_csv};
pub use sensing::{radar_waveform, run_sensing_curve, run_sensing_sweep, AccuracyCurve, AccuracyPoint, SceneRecord};
