//! Single-tone frequency estimation by FFT peak picking.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// Which estimator produced a [`SpectralEstimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    FftPeak,
    RootMusic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralEstimate<T> {
    /// Signed frequency in Hz, within `[-fs/2, fs/2]`.
    pub frequency_hz: T,
    /// Tone power estimate (squared amplitude).
    pub power: T,
    pub method: SpectralMethod,
}

/// Per-thread FFT plans and scratch space for one scalar type.
struct FftCache<T: Real> {
    planner: FftPlanner<T>,
    scratch: Vec<Complex<T>>,
}

thread_local! {
    static FFT_CACHE: RefCell<HashMap<TypeId, Box<dyn Any>>> = RefCell::new(HashMap::new());
}

/// In-place forward FFT reusing this thread's plans and scratch buffer.
fn forward_fft<T: Real>(buf: &mut [Complex<T>]) {
    FFT_CACHE.with(|cell| {
        let mut map = cell.borrow_mut();
        let entry = map
            .entry(TypeId::of::<T>())
            .or_insert_with(|| Box::new(FftCache::<T> { planner: FftPlanner::new(), scratch: Vec::new() }));
        let cache = entry.downcast_mut::<FftCache<T>>().expect("cache keyed by its scalar type");
        let fft = cache.planner.plan_fft_forward(buf.len());
        let need = fft.get_inplace_scratch_len();
        if cache.scratch.len() < need {
            cache.scratch.resize(need, Complex::new(T::zero(), T::zero()));
        }
        fft.process_with_scratch(buf, &mut cache.scratch[..need]);
    })
}

/// Frequency of the largest spectral line of `samples`.
///
/// The input is zero padded to at least `samples.len() * zero_pad_factor`
/// (rounded up to a power of two) and the peak bin is refined by fitting a
/// parabola through the magnitudes of the peak and its two neighbours.
pub fn fft_peak_frequency<T: Real>(
    samples: &[Complex<T>],
    fs: T,
    zero_pad_factor: usize,
) -> Result<SpectralEstimate<T>> {
    if samples.len() < 16 {
        return Err(Error::domain(format!("fft_peak_frequency needs >= 16 samples, got {}", samples.len())));
    }
    if zero_pad_factor == 0 {
        return Err(Error::domain("zero_pad_factor must be >= 1"));
    }
    if !(fs > T::zero()) {
        return Err(Error::domain("sample rate must be positive"));
    }

    let n = samples.len();
    let nfft = (n * zero_pad_factor).next_power_of_two();
    let mut buf = Vec::with_capacity(nfft);
    buf.extend_from_slice(samples);
    buf.resize(nfft, Complex::new(T::zero(), T::zero()));

    forward_fft(&mut buf);

    let (k, peak_sq) = buf
        .iter()
        .enumerate()
        .fold((0, T::zero()), |best, (i, c)| {
            let m = c.norm_sqr();
            if m > best.1 {
                (i, m)
            } else {
                best
            }
        });
    if !(peak_sq > T::zero()) {
        return Err(Error::NoPeak);
    }

    let peak = peak_sq.sqrt();
    let a = buf[(k + nfft - 1) % nfft].norm();
    let c = buf[(k + 1) % nfft].norm();
    let denom = a - T::lit(2.0) * peak + c;
    let delta = if denom.abs() > T::TINY {
        (T::lit(0.5) * (a - c) / denom).max(-T::lit(0.5)).min(T::lit(0.5))
    } else {
        T::zero()
    };
    let refined = peak - T::lit(0.25) * (a - c) * delta;

    let signed_bin = if k >= nfft / 2 {
        T::from_usize_lossy(k) - T::from_usize_lossy(nfft)
    } else {
        T::from_usize_lossy(k)
    };
    let half = fs * T::lit(0.5);
    let frequency_hz = ((signed_bin + delta) * fs / T::from_usize_lossy(nfft)).max(-half).min(half);
    let nn = T::from_usize_lossy(n);

    Ok(SpectralEstimate {
        frequency_hz,
        power: (refined / nn).powi(2),
        method: SpectralMethod::FftPeak,
    })
}

/// Bin spacing of [`fft_peak_frequency`] for the given input length.
pub fn fft_bin_width<T: Real>(len: usize, fs: T, zero_pad_factor: usize) -> T {
    fs / T::from_usize_lossy((len * zero_pad_factor.max(1)).next_power_of_two())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(f: f64, fs: f64, n: usize, amp: f64) -> Vec<Complex<f64>> {
        (0..n)
            .map(|i| Complex::from_polar(amp, std::f64::consts::TAU * f * i as f64 / fs))
            .collect()
    }

    #[test]
    fn pure_tone_with_padding() {
        let fs = 28.8e6;
        let x = tone(1e3, fs, 256, 1.0);
        let est = fft_peak_frequency(&x, fs, 16).unwrap();
        assert!((est.frequency_hz - 1e3).abs() <= fs / (256.0 * 16.0));
        assert_eq!(est.method, SpectralMethod::FftPeak);
    }

    #[test]
    fn dc_is_zero() {
        let x = vec![Complex::new(0.7_f64, -0.2); 64];
        let est = fft_peak_frequency(&x, 1e6, 4).unwrap();
        assert!(est.frequency_hz.abs() < 1e-6);
        assert!((est.power - 0.53).abs() < 1e-9);
    }

    #[test]
    fn quarter_rate_tone() {
        let fs = 1e6;
        let x = tone(fs / 4.0, fs, 100, 1.0);
        let est = fft_peak_frequency(&x, fs, 1).unwrap();
        assert!((est.frequency_hz - fs / 4.0).abs() <= fft_bin_width(100, fs, 1));
    }

    #[test]
    fn negative_frequency_keeps_sign() {
        let fs = 1e6;
        let x = tone(-123_456.0, fs, 1000, 1.0);
        let est = fft_peak_frequency(&x, fs, 4).unwrap();
        assert!((est.frequency_hz + 123_456.0).abs() < fft_bin_width(1000, fs, 4));
    }

    #[test]
    fn rejects_bad_input() {
        let zeros = vec![Complex::new(0.0, 0.0); 32];
        assert!(matches!(fft_peak_frequency(&zeros, 1e3, 1), Err(Error::NoPeak)));
        let short = vec![Complex::new(1.0, 0.0); 8];
        assert!(fft_peak_frequency(&short, 1e3, 1).is_err());
        let ok = vec![Complex::new(1.0, 0.0); 32];
        assert!(fft_peak_frequency(&ok, 1e3, 0).is_err());
    }

    #[test]
    fn single_precision_tone() {
        let fs = 1e5_f32;
        let x: Vec<Complex<f32>> = (0..512)
            .map(|i| Complex::from_polar(1.0, std::f32::consts::TAU * 7_000.0 * i as f32 / fs))
            .collect();
        let est = fft_peak_frequency(&x, fs, 4).unwrap();
        assert!((est.frequency_hz - 7_000.0).abs() < fs / 2048.0);
    }
}
