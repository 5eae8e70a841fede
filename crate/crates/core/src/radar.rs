//! Co-located FMCW sensing of a single debris target.
//!
//! The echo of a triangle-LFM (or V-LFM) pulse is dechirped sweep by sweep.
//! Each sweep yields one beat tone; the up-sweep beat is the range term minus
//! the Doppler term and the down-sweep beat is their sum, so half-sum and
//! half-difference separate range from radial velocity. A sinusoid only
//! supports Doppler (velocity) sensing.
//!
//! Timing convention: the echo is delayed by `4R/c`, the delay for which the
//! dechirped beat equals `(ΔF/T)·(4R/c) ∓ 2V_r/λ` and the range estimator
//! `T·c/(8ΔF)·(f_down + f_up)` is its exact inverse.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fft_peak_frequency, inv_q_function, root_music_frequencies, SpectralEstimate};
use crate::waveforms::{SampledWaveform, WaveformKind};
use crate::{Real, SPEED_OF_LIGHT};

/// Beat-frequency estimator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BeatMethod {
    #[default]
    Fft,
    Music,
}

impl BeatMethod {
    pub fn name(self) -> &'static str {
        match self {
            BeatMethod::Fft => "fft",
            BeatMethod::Music => "music",
        }
    }
}

/// One linear sweep of a composite pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub struct RadarScene<'a, T> {
    pub range_m: T,
    /// Radial velocity, positive for a closing target.
    pub radial_velocity_mps: T,
    /// Per-sample echo SNR in dB; `+inf` switches the noise off.
    pub snr_db: T,
    pub wavelength_m: T,
    pub waveform: &'a SampledWaveform<T>,
}

impl<'a, T: Real> RadarScene<'a, T> {
    pub fn new(range_m: T, radial_velocity_mps: T, snr_db: T, wavelength_m: T, waveform: &'a SampledWaveform<T>) -> Result<Self> {
        let scene = RadarScene { range_m, radial_velocity_mps, snr_db, wavelength_m, waveform };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range_m >= T::zero()) || !self.range_m.is_finite() {
            return Err(Error::domain("target range must be finite and non-negative"));
        }
        if !(self.wavelength_m > T::zero()) {
            return Err(Error::domain("wavelength must be positive"));
        }
        if self.snr_db.is_nan() || self.snr_db == T::neg_infinity() {
            return Err(Error::domain("snr_db must be a number or +inf"));
        }
        let delay = self.round_trip_delay();
        if delay >= self.waveform.sweep_duration {
            return Err(Error::EchoOutsidePulse {
                delay_s: delay.to_f64_lossy(),
                duration_s: self.waveform.sweep_duration.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Effective dechirp delay `4R/c`.
    pub fn round_trip_delay(&self) -> T {
        T::lit(4.0) * self.range_m / T::lit(SPEED_OF_LIGHT)
    }

    /// Doppler shift `2V_r/λ`.
    pub fn doppler_hz(&self) -> T {
        T::lit(2.0) * self.radial_velocity_mps / self.wavelength_m
    }

    /// Per-sample noise power; zero when noise is off.
    pub fn noise_power(&self) -> T {
        if self.snr_db.is_infinite() {
            T::zero()
        } else {
            self.waveform.amplitude * self.waveform.amplitude * T::lit(10.0).powf(-self.snr_db / T::lit(10.0))
        }
    }
}

/// Closed-form up-sweep beat `(ΔF/T)·(4R/c) − 2V_r/λ`.
pub fn beat_up<T: Real>(range_m: T, velocity_mps: T, bandwidth: T, sweep_duration: T, wavelength_m: T) -> T {
    bandwidth / sweep_duration * T::lit(4.0) * range_m / T::lit(SPEED_OF_LIGHT) - T::lit(2.0) * velocity_mps / wavelength_m
}

/// Closed-form down-sweep beat `(ΔF/T)·(4R/c) + 2V_r/λ`.
pub fn beat_down<T: Real>(range_m: T, velocity_mps: T, bandwidth: T, sweep_duration: T, wavelength_m: T) -> T {
    bandwidth / sweep_duration * T::lit(4.0) * range_m / T::lit(SPEED_OF_LIGHT) + T::lit(2.0) * velocity_mps / wavelength_m
}

/// Delayed, Doppler-shifted unit-gain copy of the transmit pulse plus
/// complex white noise. The buffer extends past the pulse by the delay so
/// the full echo is retained.
pub fn synthesize_echo<T: Real, R: Rng + ?Sized>(scene: &RadarScene<'_, T>, rng: &mut R) -> Result<Vec<Complex<T>>> {
    scene.validate()?;
    let w = scene.waveform;
    let delay = scene.round_trip_delay();
    let extra = (delay * w.fs).ceil().to_usize().unwrap_or(0);
    let n = w.samples.len() + extra;
    let mut echo = clean_echo(w, delay, scene.doppler_hz(), n);
    let noise = scene.noise_power();
    if noise > T::zero() {
        let sd = (noise * T::lit(0.5)).sqrt();
        for s in &mut echo {
            *s = *s + Complex::new(sd * T::standard_normal(rng), sd * T::standard_normal(rng));
        }
    }
    Ok(echo)
}

/// Which analytic piece of the pulse `t` falls in; the phase is quadratic
/// in time within a piece.
fn piece<T: Real>(w: &SampledWaveform<T>, t: T) -> i32 {
    if t < T::zero() {
        -1
    } else if t >= w.duration {
        3
    } else if t < w.sweep_duration {
        0
    } else {
        1
    }
}

/// Noise-free echo. Samples are evaluated exactly at the start of each
/// block and advanced by a second-order phasor recurrence inside it.
fn clean_echo<T: Real>(w: &SampledWaveform<T>, delay: T, doppler: T, n: usize) -> Vec<Complex<T>> {
    const BLOCK: usize = 64;
    let time = |i: usize| T::from_usize_lossy(i) / w.fs;
    let exact = |i: usize| {
        let t = time(i);
        let cyc = doppler * t;
        w.value_at(t - delay) * Complex::from_polar(T::one(), T::TAU() * (cyc - cyc.floor()))
    };
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let end = (start + BLOCK).min(n);
        let p = piece(w, time(start) - delay);
        if end - start < 3 || p != piece(w, time(end - 1) - delay) {
            out.extend((start..end).map(exact));
        } else if p == -1 || p == 3 {
            out.extend(std::iter::repeat_n(Complex::new(T::zero(), T::zero()), end - start));
        } else {
            let (z0, z1, z2) = (exact(start), exact(start + 1), exact(start + 2));
            let mut step = z1 / z0;
            let curve = z2 / z1 / step;
            let mut z = z0;
            for _ in start..end {
                out.push(z);
                z = z * step;
                step = step * curve;
            }
        }
        start = end;
    }
    out
}

/// Sample window `(start, len)` of `segment` within `waveform`.
pub fn segment_window<T: Real>(waveform: &SampledWaveform<T>, segment: Segment) -> Result<(usize, usize)> {
    let n = waveform.sweep_len();
    match (waveform.kind, segment) {
        (WaveformKind::UpChirp, Segment::Up) | (WaveformKind::DownChirp, Segment::Down) => Ok((0, n)),
        (WaveformKind::TriangleLfm, Segment::Up) | (WaveformKind::VLfm, Segment::Down) => Ok((0, n)),
        (WaveformKind::TriangleLfm, Segment::Down) | (WaveformKind::VLfm, Segment::Up) => Ok((n, n)),
        (kind, seg) => Err(Error::domain(format!("{} has no {seg:?} sweep", kind.name()))),
    }
}

/// Mixes `rx` with the conjugate of the reference sweep: `rx · conj(ref)`.
pub fn dechirp<T: Real>(rx: &[Complex<T>], reference: &SampledWaveform<T>, segment: Segment) -> Result<Vec<Complex<T>>> {
    let (start, len) = segment_window(reference, segment)?;
    if rx.len() != len {
        return Err(Error::Framing { expected: len, actual: rx.len() });
    }
    Ok(rx.iter().zip(&reference.samples[start..start + len]).map(|(r, x)| r * x.conj()).collect())
}

fn estimate_tone<T: Real>(x: &[Complex<T>], fs: T, method: BeatMethod, zero_pad_factor: usize) -> Result<SpectralEstimate<T>> {
    match method {
        BeatMethod::Fft => fft_peak_frequency(x, fs, zero_pad_factor),
        BeatMethod::Music => root_music_frequencies(x, 1, fs)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::Estimation("no root-MUSIC estimate".into())),
    }
}

/// Beat-frequency magnitudes of both sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Beats<T> {
    pub up: T,
    pub down: T,
}

/// Dechirps each sweep of a composite pulse separately and estimates one
/// tone per sweep. The first `config.gate_s` seconds of each dechirped
/// sweep are discarded before estimation.
pub fn estimate_beats<T: Real>(echo: &[Complex<T>], waveform: &SampledWaveform<T>, config: &SenseConfig<T>) -> Result<Beats<T>> {
    if !waveform.kind.is_composite() {
        return Err(Error::domain(format!("beat pair needs a composite pulse, got {}", waveform.kind.name())));
    }
    if echo.len() < waveform.samples.len() {
        return Err(Error::Framing { expected: waveform.samples.len(), actual: echo.len() });
    }
    let tone = |segment| -> Result<T> {
        let (start, len) = segment_window(waveform, segment)?;
        let mixed = dechirp(&echo[start..start + len], waveform, segment)?;
        let skip = config.gate_samples(waveform.fs, len)?;
        Ok(estimate_tone(&mixed[skip..], waveform.fs, config.method, config.zero_pad_factor)?.frequency_hz.abs())
    };
    Ok(Beats { up: tone(Segment::Up)?, down: tone(Segment::Down)? })
}

/// `R̂ = T·c/(8ΔF)·(f_down + f_up)`.
pub fn estimate_range<T: Real>(f_up: T, f_down: T, sweep_duration: T, bandwidth: T) -> T {
    sweep_duration * T::lit(SPEED_OF_LIGHT) / (T::lit(8.0) * bandwidth) * (f_down + f_up)
}

/// `V̂_r = λ/4·(f_down − f_up)`, positive for a closing target.
pub fn estimate_velocity<T: Real>(f_up: T, f_down: T, wavelength_m: T) -> T {
    wavelength_m / T::lit(4.0) * (f_down - f_up)
}

/// Continuous-wave Doppler velocity: mixes the echo with the conjugate
/// transmit tone and converts the residual frequency, `V̂ = f_D·λ/2`.
pub fn estimate_velocity_cw<T: Real>(
    echo: &[Complex<T>],
    waveform: &SampledWaveform<T>,
    wavelength_m: T,
    config: &SenseConfig<T>,
) -> Result<T> {
    if waveform.kind != WaveformKind::Sinusoid {
        return Err(Error::domain("CW velocity needs a sinusoid"));
    }
    let n = waveform.samples.len();
    if echo.len() < n {
        return Err(Error::Framing { expected: n, actual: echo.len() });
    }
    let mixed: Vec<Complex<T>> = echo[..n].iter().zip(&waveform.samples).map(|(r, x)| r * x.conj()).collect();
    let skip = config.gate_samples(waveform.fs, n)?;
    let fd = estimate_tone(&mixed[skip..], waveform.fs, config.method, config.zero_pad_factor)?.frequency_hz;
    Ok(fd * wavelength_m / T::lit(2.0))
}

/// Neyman-Pearson threshold `P_n·γ` with `γ = Q⁻¹(1 − P_FA)`.
///
/// `γ` is the lower-tail quantile, so for `P_FA < 1/2` it is negative.
/// [`DetectionThreshold::detects`] compares against the mirrored level
/// `−P_n·γ = P_n·Q⁻¹(P_FA)`, which yields false-alarm rate `P_FA` for a
/// statistic distributed as `N(0, P_n²)` under noise only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionThreshold<T> {
    pub p_fa: T,
    pub noise_power: T,
    pub gamma: T,
    pub threshold: T,
}

impl<T: Real> DetectionThreshold<T> {
    /// Exceedance level applied to the detection statistic.
    pub fn exceedance_level(&self) -> T {
        -self.threshold
    }

    pub fn detects(&self, statistic: T) -> bool {
        statistic > self.exceedance_level()
    }
}

pub fn np_threshold<T: Real>(noise_power: T, p_fa: T) -> Result<DetectionThreshold<T>> {
    if !(noise_power > T::zero()) {
        return Err(Error::domain("noise power must be positive"));
    }
    let gamma = inv_q_function(T::one() - p_fa)?;
    Ok(DetectionThreshold { p_fa, noise_power, gamma, threshold: noise_power * gamma })
}

/// Excess-power statistic `√L·(mean|x|² − P_n)`; approximately `N(0, P_n²)`
/// when `x` is complex white noise of power `P_n`.
pub fn excess_power_statistic<T: Real>(samples: &[Complex<T>], noise_power: T) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::domain("detection window is empty"));
    }
    let n = T::from_usize_lossy(samples.len());
    let mean = samples.iter().fold(T::zero(), |a, s| a + s.norm_sqr()) / n;
    Ok(n.sqrt() * (mean - noise_power))
}

/// `max(0, 100 − |true − est| / |true| · 100)`.
pub fn accuracy_percent<T: Real>(truth: T, estimate: T) -> Result<T> {
    if truth == T::zero() || !truth.is_finite() {
        return Err(Error::domain("accuracy needs a finite non-zero true value"));
    }
    let hundred = T::lit(100.0);
    let raw = hundred - (truth - estimate).abs() / truth.abs() * hundred;
    Ok(if raw.is_nan() { T::zero() } else { raw.max(T::zero()).min(hundred) })
}

/// Settings for [`sense`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SenseConfig<T> {
    pub p_fa: T,
    pub method: BeatMethod,
    pub zero_pad_factor: usize,
    /// Leading part of each dechirped sweep to discard, seconds. Setting it
    /// to the largest expected delay removes the transient where the echo
    /// still belongs to the previous sweep.
    pub gate_s: T,
}

impl<T: Real> Default for SenseConfig<T> {
    fn default() -> Self {
        SenseConfig { p_fa: T::lit(1e-3), method: BeatMethod::Fft, zero_pad_factor: 1, gate_s: T::zero() }
    }
}

impl<T: Real> SenseConfig<T> {
    fn gate_samples(&self, fs: T, len: usize) -> Result<usize> {
        if !(self.gate_s >= T::zero()) {
            return Err(Error::domain("gate must be non-negative"));
        }
        let skip = (self.gate_s * fs).ceil().to_usize().unwrap_or(usize::MAX);
        if skip >= len {
            return Err(Error::domain("gate leaves no samples to estimate from"));
        }
        Ok(skip)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadarEstimate<T> {
    pub f_beat_up: Option<T>,
    pub f_beat_down: Option<T>,
    pub range_m: Option<T>,
    pub velocity_mps: T,
    pub detected: bool,
    pub range_accuracy_pct: Option<T>,
    pub velocity_accuracy_pct: T,
}

/// Full sensing chain for one scene.
///
/// Estimates are always formed; `detected` reports whether the excess echo
/// power over the pulse window clears the Neyman-Pearson level.
pub fn sense<T: Real, R: Rng + ?Sized>(scene: &RadarScene<'_, T>, config: &SenseConfig<T>, rng: &mut R) -> Result<RadarEstimate<T>> {
    let echo = synthesize_echo(scene, rng)?;
    let w = scene.waveform;
    let window = &echo[..w.samples.len()];

    let noise = scene.noise_power();
    let detected = if noise > T::zero() {
        let thr = np_threshold(noise, config.p_fa)?;
        thr.detects(excess_power_statistic(window, noise)?)
    } else {
        window.iter().any(|s| s.norm_sqr() > T::zero())
    };

    match w.kind {
        WaveformKind::TriangleLfm | WaveformKind::VLfm => {
            let beats = estimate_beats(&echo, w, config)?;
            let range = estimate_range(beats.up, beats.down, w.sweep_duration, w.bandwidth);
            let velocity = estimate_velocity(beats.up, beats.down, scene.wavelength_m);
            Ok(RadarEstimate {
                f_beat_up: Some(beats.up),
                f_beat_down: Some(beats.down),
                range_m: Some(range),
                velocity_mps: velocity,
                detected,
                range_accuracy_pct: Some(accuracy_percent(scene.range_m, range)?),
                velocity_accuracy_pct: accuracy_percent(scene.radial_velocity_mps, velocity)?,
            })
        }
        WaveformKind::Sinusoid => {
            let velocity = estimate_velocity_cw(&echo, w, scene.wavelength_m, config)?;
            Ok(RadarEstimate {
                f_beat_up: None,
                f_beat_down: None,
                range_m: None,
                velocity_mps: velocity,
                detected,
                range_accuracy_pct: None,
                velocity_accuracy_pct: accuracy_percent(scene.radial_velocity_mps, velocity)?,
            })
        }
        kind => Err(Error::domain(format!("sensing needs a triangle-LFM, V-LFM or sinusoid pulse, got {}", kind.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{complex_gaussian, fft_bin_width, RngStream};
    use std::f64::consts::TAU;
    use crate::waveforms::{gen_sinusoid, gen_triangle_lfm, gen_up_chirp, gen_v_lfm};

    const BW: f64 = 10e6;
    const T_SWEEP: f64 = 50e-3;
    const FS: f64 = 28.8e6;
    const LAMBDA: f64 = 0.06;

    fn bin() -> f64 {
        fft_bin_width((T_SWEEP * FS) as usize, FS, 1)
    }

    #[test]
    fn closed_form_beats_match_worked_example() {
        let up = beat_up(1000e3, 7500.0, BW, T_SWEEP, LAMBDA);
        let down = beat_down(1000e3, 7500.0, BW, T_SWEEP, LAMBDA);
        assert!((up - 2.41667e6).abs() < 10.0);
        assert!((down - 2.91667e6).abs() < 10.0);
        assert!((estimate_range(up, down, T_SWEEP, BW) - 1000e3).abs() < 1e-6);
        assert!((estimate_velocity(up, down, LAMBDA) - 7500.0).abs() < 1e-9);
    }

    #[test]
    fn estimator_examples() {
        let r = estimate_range(2.417e6, 2.917e6, T_SWEEP, BW);
        assert!(((r - 1000e3) / 1000e3).abs() < 1e-3);
        assert_eq!(estimate_range(0.0, 0.0, T_SWEEP, BW), 0.0);
        assert!((estimate_range(2.0 * 2.417e6, 2.0 * 2.917e6, T_SWEEP, BW) - 2.0 * r).abs() < 1e-6);
        let v = estimate_velocity(2.417e6, 2.917e6, LAMBDA);
        assert!(((v - 7500.0) / 7500.0).abs() < 1e-3);
        assert_eq!(estimate_velocity(1e6, 1e6, LAMBDA), 0.0);
        assert_eq!(estimate_velocity(2.917e6, 2.417e6, LAMBDA), -v);
    }

    #[test]
    fn echo_beat_for_static_target() {
        let w = gen_triangle_lfm(BW, T_SWEEP, FS).unwrap();
        let scene = RadarScene::new(1000e3, 0.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut RngStream::new(0, 0)).unwrap();
        let beats = estimate_beats(&echo, &w, &SenseConfig::default()).unwrap();
        assert!((beats.up - 2.6667e6).abs() < 1.0 / T_SWEEP + 40.0, "{}", beats.up);
        assert!((beats.up - beats.down).abs() <= bin());
    }

    #[test]
    fn echo_beat_for_zero_range() {
        let w = gen_triangle_lfm(BW, T_SWEEP, FS).unwrap();
        let scene = RadarScene::new(0.0, 7500.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut RngStream::new(0, 0)).unwrap();
        let beats = estimate_beats(&echo, &w, &SenseConfig::default()).unwrap();
        assert!((beats.up - 250e3).abs() <= 1.0 / T_SWEEP);
        assert!((beats.down - 250e3).abs() <= 1.0 / T_SWEEP);
    }

    #[test]
    fn noiseless_echo_keeps_energy() {
        let w = gen_triangle_lfm(BW, 1e-3, FS).unwrap();
        let scene = RadarScene::new(50e3, 7500.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut RngStream::new(0, 0)).unwrap();
        let e: f64 = echo.iter().map(|s| s.norm_sqr()).sum::<f64>() / FS;
        assert!(((e - w.energy()) / w.energy()).abs() < 0.01);
    }

    #[test]
    fn block_recurrence_matches_exact_evaluation() {
        let w = gen_triangle_lfm(BW, 1e-3, FS).unwrap();
        let scene = RadarScene::new(37e3, 7700.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut RngStream::new(0, 0)).unwrap();
        let delay = scene.round_trip_delay();
        for (i, s) in echo.iter().enumerate() {
            let t = i as f64 / FS;
            let exact = w.value_at(t - delay) * Complex::from_polar(1.0, TAU * scene.doppler_hz() * t);
            assert!((s - exact).norm() < 1e-7 * w.amplitude, "{i}");
        }
    }

    #[test]
    fn echo_outside_pulse_rejected() {
        let w = gen_triangle_lfm(BW, 1e-3, FS).unwrap();
        assert!(matches!(RadarScene::new(100e3, 0.0, 10.0, LAMBDA, &w), Err(Error::EchoOutsidePulse { .. })));
    }

    #[test]
    fn dechirp_examples() {
        let w = gen_up_chirp(BW, 1e-4, FS, 1.0).unwrap();
        let out = dechirp(&w.samples, &w, Segment::Up).unwrap();
        assert!(out.iter().all(|c| (c - Complex::new(1.0, 0.0)).norm() < 1e-9));
        assert_eq!(fft_peak_frequency(&out, FS, 1).unwrap().frequency_hz, 0.0);

        let mut shifted = vec![Complex::new(0.0, 0.0)];
        shifted.extend_from_slice(&w.samples[..w.samples.len() - 1]);
        let out = dechirp(&shifted, &w, Segment::Up).unwrap();
        let f = fft_peak_frequency(&out, FS, 4).unwrap().frequency_hz.abs();
        let mu = BW / 1e-4;
        assert!((f - mu / FS).abs() <= fft_bin_width(out.len(), FS, 1), "{f}");
        for ((o, r), x) in out.iter().zip(&shifted).zip(&w.samples) {
            assert!((o.norm() - r.norm() * x.norm()).abs() < 1e-12);
        }

        assert!(dechirp(&w.samples[..10], &w, Segment::Up).is_err());
        assert!(dechirp(&w.samples, &w, Segment::Down).is_err());
    }

    #[test]
    fn v_lfm_recovers_target_too() {
        let w = gen_v_lfm(BW, 5e-3, FS).unwrap();
        let scene = RadarScene::new(300e3, 8000.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let est = sense(&scene, &SenseConfig::default(), &mut RngStream::new(0, 0)).unwrap();
        assert!(est.range_accuracy_pct.unwrap() > 99.5);
        assert!(est.velocity_accuracy_pct > 99.5);
    }

    #[test]
    fn cw_velocity_examples() {
        let w = gen_sinusoid(1e6, 1.0, 5e-3, FS).unwrap();
        let pad4 = SenseConfig { zero_pad_factor: 4, ..SenseConfig::default() };
        let mut rng = RngStream::new(0, 0);
        let scene = RadarScene::new(100e3, 7500.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut rng).unwrap();
        let v = estimate_velocity_cw(&echo, &w, LAMBDA, &pad4).unwrap();
        assert!(((v - 7500.0) / 7500.0).abs() < 1e-3);
        let scaled: Vec<_> = echo.iter().map(|s| s * 3.7).collect();
        assert_eq!(estimate_velocity_cw(&scaled, &w, LAMBDA, &pad4).unwrap(), v);

        let still = RadarScene::new(100e3, 0.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&still, &mut rng).unwrap();
        let v0 = estimate_velocity_cw(&echo, &w, LAMBDA, &pad4).unwrap();
        assert!(v0.abs() <= fft_bin_width(w.samples.len(), FS, 4) * LAMBDA / 2.0);

        let tri = gen_triangle_lfm(BW, 1e-3, FS).unwrap();
        assert!(estimate_velocity_cw(&echo, &tri, LAMBDA, &SenseConfig::default()).is_err());
    }

    #[test]
    fn gate_must_leave_samples() {
        let w = gen_triangle_lfm(BW, 1e-3, FS).unwrap();
        let scene = RadarScene::new(10e3, 7200.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let echo = synthesize_echo(&scene, &mut RngStream::new(0, 0)).unwrap();
        let cfg = SenseConfig { gate_s: 1e-3, ..SenseConfig::default() };
        assert!(estimate_beats(&echo, &w, &cfg).is_err());
        let cfg = SenseConfig { gate_s: 0.5e-3, ..SenseConfig::default() };
        let gated = estimate_beats(&echo, &w, &cfg).unwrap();
        let full = estimate_beats(&echo, &w, &SenseConfig::default()).unwrap();
        assert!((gated.up - full.up).abs() < 2.0 * fft_bin_width(14_400, FS, 1));
    }

    #[test]
    fn np_threshold_examples() {
        let t = np_threshold(1.0_f64, 0.5).unwrap();
        assert!(t.gamma.abs() < 1e-12 && t.threshold.abs() < 1e-12);
        let t = np_threshold(1.0_f64, 1e-3).unwrap();
        let oracle = inv_q_function(0.999_f64).unwrap();
        assert!((t.threshold - oracle).abs() < 1e-12);
        assert!((t.threshold + 3.0902).abs() < 1e-3);
        let t2 = np_threshold(2.5_f64, 1e-3).unwrap();
        assert!((t2.threshold - 2.5 * t.threshold).abs() < 1e-12);
        assert!(np_threshold(0.0, 1e-3).is_err());
        assert!(np_threshold(1.0, 0.0).is_err());
        assert!(np_threshold(1.0, 1.0).is_err());
    }

    #[test]
    fn false_alarm_rate_on_noise() {
        let p_fa = 1e-2;
        let thr = np_threshold(0.7, p_fa).unwrap();
        let trials = 20_000;
        let mut alarms = 0;
        for t in 0..trials {
            let mut rng = RngStream::new(31, t);
            let x: Vec<Complex<f64>> = (0..4096).map(|_| complex_gaussian(0.7, &mut rng)).collect();
            if thr.detects(excess_power_statistic(&x, 0.7).unwrap()) {
                alarms += 1;
            }
        }
        let rate = alarms as f64 / trials as f64;
        assert!(rate < 2.0 * p_fa && rate > 0.5 * p_fa, "{rate}");
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy_percent(1000.0, 1000.0).unwrap(), 100.0);
        assert!((accuracy_percent(1000.0_f64, 700.0).unwrap() - 70.0).abs() < 1e-12);
        assert_eq!(accuracy_percent(1000.0, 2500.0).unwrap(), 0.0);
        assert!(accuracy_percent(0.0, 1.0).is_err());
    }

    #[test]
    fn sense_worked_example() {
        let w = gen_triangle_lfm(BW, T_SWEEP, FS).unwrap();
        let scene = RadarScene::new(1000e3, 7500.0, f64::INFINITY, LAMBDA, &w).unwrap();
        let est = sense(&scene, &SenseConfig::default(), &mut RngStream::new(0, 0)).unwrap();
        assert!(est.detected);
        assert!(est.range_accuracy_pct.unwrap() >= 99.5);
        assert!(est.velocity_accuracy_pct >= 99.5);
    }

    #[test]
    fn sense_misses_buried_target() {
        let w = gen_triangle_lfm(BW, 2e-3, FS).unwrap();
        let mut misses = 0;
        for t in 0..100 {
            let scene = RadarScene::new(100e3, 7500.0, -40.0, LAMBDA, &w).unwrap();
            let est = sense(&scene, &SenseConfig::default(), &mut RngStream::new(7, t)).unwrap();
            if !est.detected {
                misses += 1;
            }
        }
        assert!(misses >= 90, "{misses}");
    }

    #[test]
    fn sinusoid_scene_senses_velocity_only() {
        let w = gen_sinusoid(1e6, 1.0, 5e-3, FS).unwrap();
        let scene = RadarScene::new(200e3, 8000.0, 10.0, LAMBDA, &w).unwrap();
        let est = sense(&scene, &SenseConfig::default(), &mut RngStream::new(0, 0)).unwrap();
        assert!(est.range_m.is_none() && est.range_accuracy_pct.is_none() && est.f_beat_up.is_none());
        assert!(est.velocity_accuracy_pct > 99.0);
    }

    #[test]
    fn music_method_matches_fft() {
        let w = gen_triangle_lfm(BW, 5e-3, FS).unwrap();
        let scene = RadarScene::new(300e3, 7200.0, 10.0, LAMBDA, &w).unwrap();
        let cfg = SenseConfig { method: BeatMethod::Music, gate_s: 4.0 * 300e3 / SPEED_OF_LIGHT, ..SenseConfig::default() };
        let est = sense(&scene, &cfg, &mut RngStream::new(1, 0)).unwrap();
        assert!(est.range_accuracy_pct.unwrap() > 99.0, "{est:?}");
        assert!(est.velocity_accuracy_pct > 99.0, "{est:?}");
    }
}
