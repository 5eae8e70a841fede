//! Transmit waveforms: linear chirps, the analytic sinusoid, and the
//! triangle-LFM / V-LFM composite pulses, plus the ambiguity function.
//!
//! All waveforms are complex baseband. Chirps sweep symmetrically about DC
//! (`-ΔF/2 .. ΔF/2`), so the composite pulses are phase- and
//! frequency-continuous at the turnaround.

mod ambiguity;

use std::io::Write;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

pub use ambiguity::{ambiguity, AmbiguitySurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKind {
    UpChirp,
    DownChirp,
    TriangleLfm,
    VLfm,
    Sinusoid,
}

impl WaveformKind {
    pub fn name(self) -> &'static str {
        match self {
            WaveformKind::UpChirp => "up_chirp",
            WaveformKind::DownChirp => "down_chirp",
            WaveformKind::TriangleLfm => "triangle_lfm",
            WaveformKind::VLfm => "v_lfm",
            WaveformKind::Sinusoid => "sinusoid",
        }
    }

    /// Whether the pulse is an up/down (or down/up) pair of sweeps.
    pub fn is_composite(self) -> bool {
        matches!(self, WaveformKind::TriangleLfm | WaveformKind::VLfm)
    }
}

/// A sampled complex baseband waveform together with the parameters that
/// define it analytically.
#[derive(Clone, Debug)]
pub struct SampledWaveform<T> {
    pub samples: Vec<Complex<T>>,
    pub fs: T,
    /// Total duration in seconds (twice the sweep time for composite pulses).
    pub duration: T,
    /// Duration of one linear sweep (equal to `duration` for single sweeps).
    pub sweep_duration: T,
    pub kind: WaveformKind,
    /// Carrier offset of the baseband signal; the tone frequency for a sinusoid.
    pub center_frequency: T,
    /// Swept bandwidth ΔF; zero for a sinusoid.
    pub bandwidth: T,
    /// Constant envelope |x(t)|.
    pub amplitude: T,
}

fn check_common<T: Real>(bandwidth: T, duration: T, fs: T) -> Result<()> {
    if !(fs > T::zero()) {
        return Err(Error::domain("sample rate must be positive"));
    }
    if !(duration > T::zero()) {
        return Err(Error::domain("pulse duration must be positive"));
    }
    if bandwidth < T::zero() {
        return Err(Error::domain("bandwidth must be non-negative"));
    }
    if bandwidth >= fs {
        return Err(Error::Aliasing {
            what: "bandwidth",
            value: bandwidth.to_f64_lossy(),
            limit: fs.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Phase of a linear sweep in cycles, folded into `[0, 1)`.
#[inline]
fn sweep_cycles<T: Real>(start_hz: T, rate: T, t: T) -> T {
    let c = t * (start_hz + T::lit(0.5) * rate * t);
    c - c.floor()
}

#[inline]
fn sample_count<T: Real>(fs: T, duration: T) -> usize {
    (fs * duration).round().to_usize().unwrap_or(0)
}

impl<T: Real> SampledWaveform<T> {
    /// Chirp rate μ = ΔF / T of one sweep.
    pub fn chirp_rate(&self) -> T {
        self.bandwidth / self.sweep_duration
    }

    /// Samples in one sweep.
    pub fn sweep_len(&self) -> usize {
        sample_count(self.fs, self.sweep_duration)
    }

    /// Discrete energy `Σ|x|² / fs`.
    pub fn energy(&self) -> T {
        self.samples.iter().fold(T::zero(), |a, s| a + s.norm_sqr()) / self.fs
    }

    /// Evaluates the waveform at an arbitrary time; zero outside `[0, duration)`.
    pub fn value_at(&self, t: T) -> Complex<T> {
        if t < T::zero() || t >= self.duration {
            return Complex::new(T::zero(), T::zero());
        }
        let half_bw = T::lit(0.5) * self.bandwidth;
        let mu = self.chirp_rate();
        let up = |t: T| sweep_cycles(-half_bw, mu, t);
        let down = |t: T| sweep_cycles(half_bw, -mu, t);
        let cycles = match self.kind {
            WaveformKind::UpChirp => up(t),
            WaveformKind::DownChirp => down(t),
            WaveformKind::TriangleLfm => {
                if t < self.sweep_duration {
                    up(t)
                } else {
                    down(t - self.sweep_duration)
                }
            }
            WaveformKind::VLfm => {
                if t < self.sweep_duration {
                    down(t)
                } else {
                    up(t - self.sweep_duration)
                }
            }
            WaveformKind::Sinusoid => {
                let c = self.center_frequency * t;
                c - c.floor()
            }
        };
        Complex::from_polar(self.amplitude, cycles * T::TAU())
    }

    fn build(
        kind: WaveformKind,
        bandwidth: T,
        sweep_duration: T,
        fs: T,
        amplitude: T,
        center_frequency: T,
    ) -> Self {
        let sweeps = if kind.is_composite() { 2 } else { 1 };
        let duration = sweep_duration * T::from_usize_lossy(sweeps);
        let mut w = SampledWaveform {
            samples: Vec::new(),
            fs,
            duration,
            sweep_duration,
            kind,
            center_frequency,
            bandwidth,
            amplitude,
        };
        let n = sample_count(fs, sweep_duration) * sweeps;
        w.samples = (0..n).map(|i| w.value_at(T::from_usize_lossy(i) / fs)).collect();
        w
    }

    /// Writes `t, re, im` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,re,im")?;
        for (i, s) in self.samples.iter().enumerate() {
            let t = T::from_usize_lossy(i) / self.fs;
            writeln!(out, "{:e},{:e},{:e}", t.to_f64_lossy(), s.re.to_f64_lossy(), s.im.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Chirp sweeping linearly from `-ΔF/2` to `+ΔF/2` over `[0, T)`.
pub fn gen_up_chirp<T: Real>(bandwidth: T, duration: T, fs: T, amplitude: T) -> Result<SampledWaveform<T>> {
    check_common(bandwidth, duration, fs)?;
    Ok(SampledWaveform::build(WaveformKind::UpChirp, bandwidth, duration, fs, amplitude, T::zero()))
}

/// Chirp sweeping linearly from `+ΔF/2` to `-ΔF/2` over `[0, T)`.
pub fn gen_down_chirp<T: Real>(bandwidth: T, duration: T, fs: T, amplitude: T) -> Result<SampledWaveform<T>> {
    check_common(bandwidth, duration, fs)?;
    Ok(SampledWaveform::build(WaveformKind::DownChirp, bandwidth, duration, fs, amplitude, T::zero()))
}

/// Analytic sinusoid `A·exp(j2πft)`.
pub fn gen_sinusoid<T: Real>(frequency: T, amplitude: T, duration: T, fs: T) -> Result<SampledWaveform<T>> {
    check_common(T::zero(), duration, fs)?;
    if frequency.abs() >= fs * T::lit(0.5) {
        return Err(Error::Aliasing {
            what: "tone frequency",
            value: frequency.to_f64_lossy(),
            limit: (fs * T::lit(0.5)).to_f64_lossy(),
        });
    }
    Ok(SampledWaveform::build(WaveformKind::Sinusoid, T::zero(), duration, fs, amplitude, frequency))
}

/// Unit-energy up-sweep followed by down-sweep, total duration `2T`.
pub fn gen_triangle_lfm<T: Real>(bandwidth: T, sweep_duration: T, fs: T) -> Result<SampledWaveform<T>> {
    check_common(bandwidth, sweep_duration, fs)?;
    let amp = (T::one() / (T::lit(2.0) * sweep_duration)).sqrt();
    Ok(SampledWaveform::build(WaveformKind::TriangleLfm, bandwidth, sweep_duration, fs, amp, T::zero()))
}

/// Unit-energy down-sweep followed by up-sweep, total duration `2T`.
pub fn gen_v_lfm<T: Real>(bandwidth: T, sweep_duration: T, fs: T) -> Result<SampledWaveform<T>> {
    check_common(bandwidth, sweep_duration, fs)?;
    let amp = (T::one() / (T::lit(2.0) * sweep_duration)).sqrt();
    Ok(SampledWaveform::build(WaveformKind::VLfm, bandwidth, sweep_duration, fs, amp, T::zero()))
}
