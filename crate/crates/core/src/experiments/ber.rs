use std::io::Write;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, WaveformChoice, Weighting};
use crate::channel::{doppler_shift, slant_distance, ShadowedRician};
use crate::error::Result;
use crate::numerics::{complex_gaussian, stream_id, RngStream};
use crate::receiver::{apply_weights, count_bit_errors, instantaneous_weights, ml_detect, ml_detect_weighted};
use crate::ssk::{bits_per_symbol, demap_index, map_bits};
use crate::waveforms::{gen_sinusoid, gen_triangle_lfm};
use crate::SPEED_OF_LIGHT;

const TAG_BER: u8 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerCurve {
    pub n_t: usize,
    pub waveform: WaveformChoice,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn file_name(&self) -> String {
        format!("ber_{}_{}.csv", self.n_t, self.waveform.name())
    }

    pub fn write_csv<W: Write>(&self, cfg: &ExperimentConfig, mut out: W) -> Result<()> {
        cfg.write_metadata(&mut out)?;
        writeln!(out, "# n_t: {}, waveform: {}", self.n_t, self.waveform.name())?;
        writeln!(out, "snr_db,ber,trials,std_err")?;
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.snr_db, p.ber, p.trials, p.std_err)?;
        }
        Ok(())
    }
}

/// Unit-energy symbol pulse (`Σ|s|² = 1`) of the chosen waveform.
pub fn symbol_pulse(cfg: &ExperimentConfig, waveform: WaveformChoice) -> Result<Vec<Complex<f64>>> {
    let n = cfg.symbol_samples;
    let w = match waveform {
        WaveformChoice::Chirp => gen_triangle_lfm(cfg.bandwidth_hz, (n / 2) as f64 / cfg.fs_hz, cfg.fs_hz)?,
        WaveformChoice::Sinusoid => gen_sinusoid(cfg.sinusoid_hz, 1.0, n as f64 / cfg.fs_hz, cfg.fs_hz)?,
    };
    let norm = w.samples.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
    Ok(w.samples.iter().map(|s| s / norm).collect())
}

/// Stream curve index: keyed by antenna count and waveform so a curve's
/// numbers do not depend on its position in the config.
fn curve_key(n_t: usize, waveform: WaveformChoice) -> usize {
    (n_t.trailing_zeros() as usize) | (waveform.index() << 5)
}

/// Everything a trial needs that does not change between trials.
struct Link {
    law: ShadowedRician<f64>,
    pulse: Vec<Complex<f64>>,
    doppler_hz: f64,
    delay_s: f64,
    symbol_period_s: f64,
}

impl Link {
    fn new(cfg: &ExperimentConfig, waveform: WaveformChoice) -> Result<Self> {
        let geom = cfg.geometry()?;
        let pulse = symbol_pulse(cfg, waveform)?;
        Ok(Link {
            law: ShadowedRician::new(cfg.k_factor_linear(), cfg.nakagami_m, cfg.omega, cfg.sigma_r)?,
            symbol_period_s: pulse.len() as f64 / cfg.fs_hz,
            pulse,
            doppler_hz: doppler_shift(&geom),
            delay_s: slant_distance(&geom) / SPEED_OF_LIGHT,
        })
    }
}

/// One symbol: draw bits and channel, send the pulse from the selected
/// antenna, matched-filter each receive branch, detect and count errors.
fn run_trial(cfg: &ExperimentConfig, link: &Link, n_t: usize, noise_var: f64, trial: u64, rng: &mut RngStream) -> Result<u64> {
    let k = bits_per_symbol(n_t)?;
    let bits: Vec<u8> = (0..k).map(|_| rng.random::<bool>() as u8).collect();
    let symbol = map_bits(&bits, n_t)?;
    let h = link
        .law
        .sample(n_t, cfg.n_r, rng)
        .with_propagation(link.doppler_hz, link.delay_s)
        .at_slot(cfg.carrier_hz, trial as f64 * link.symbol_period_s);

    let y: Vec<Complex<f64>> = (0..cfg.n_r)
        .map(|l| {
            let g = h.entry(l, symbol.antenna_index);
            link.pulse.iter().fold(Complex::new(0.0, 0.0), |acc, &s| {
                let mut r = g * s;
                if noise_var > 0.0 {
                    r += complex_gaussian(noise_var, rng);
                }
                acc + r * s.conj()
            })
        })
        .collect();

    let detected = match cfg.weighting {
        Weighting::Off => ml_detect(&y, &h, 1.0, 1.0)?,
        Weighting::ObservationOnly => ml_detect(&apply_weights(&instantaneous_weights(&y)?, &y)?, &h, 1.0, 1.0)?,
        Weighting::Symmetric => ml_detect_weighted(&y, &instantaneous_weights(&y)?, &h, 1.0, 1.0)?,
    };
    Ok(count_bit_errors(&bits, &demap_index(detected.detected_index, n_t)?)? as u64)
}

/// Noise variance per sample for a given SNR in dB, with unit symbol energy
/// and unit composite link gain.
pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Simulates one SNR point. Trials use independent random streams and the
/// bit-error total does not depend on evaluation order.
pub fn simulate_ber_point(cfg: &ExperimentConfig, n_t: usize, waveform: WaveformChoice, point: usize) -> Result<BerPoint> {
    cfg.validate()?;
    let link = Link::new(cfg, waveform)?;
    let snr_db = cfg.snr_grid_db[point];
    let noise_var = noise_variance(snr_db);
    let curve = curve_key(n_t, waveform);
    let bit_errors = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = RngStream::new(cfg.seed, stream_id(TAG_BER, curve, point, trial));
            run_trial(cfg, &link, n_t, noise_var, trial, &mut rng)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let bits = cfg.trials * bits_per_symbol(n_t)? as u64;
    let ber = bit_errors as f64 / bits as f64;
    Ok(BerPoint { snr_db, ber, trials: cfg.trials, bit_errors, std_err: (ber * (1.0 - ber) / bits as f64).sqrt() })
}

pub fn run_ber_curve(cfg: &ExperimentConfig, n_t: usize, waveform: WaveformChoice) -> Result<BerCurve> {
    let points = (0..cfg.snr_grid_db.len()).map(|p| simulate_ber_point(cfg, n_t, waveform, p)).collect::<Result<_>>()?;
    Ok(BerCurve { n_t, waveform, points })
}

/// One curve per configured antenna count, for the configured waveform.
pub fn run_ber_sweep(cfg: &ExperimentConfig) -> Result<Vec<BerCurve>> {
    cfg.validate()?;
    cfg.n_t.iter().map(|&n_t| run_ber_curve(cfg, n_t, cfg.waveform)).collect()
}
