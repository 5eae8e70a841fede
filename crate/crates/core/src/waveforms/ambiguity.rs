use num_complex::Complex;

use super::SampledWaveform;
use crate::error::{Error, Result};
use crate::Real;

/// Samples of `|χ(τ, f_d)|²` on a delay/Doppler grid.
#[derive(Clone, Debug)]
pub struct AmbiguitySurface<T> {
    /// Delays actually evaluated, snapped to whole samples.
    pub delays: Vec<T>,
    pub dopplers: Vec<T>,
    /// Row-major, one row per delay.
    pub values: Vec<T>,
}

impl<T: Real> AmbiguitySurface<T> {
    pub fn value(&self, delay_idx: usize, doppler_idx: usize) -> T {
        self.values[delay_idx * self.dopplers.len() + doppler_idx]
    }

    pub fn peak(&self) -> (usize, usize, T) {
        let nd = self.dopplers.len();
        self.values
            .iter()
            .enumerate()
            .fold((0, 0, T::neg_infinity()), |best, (k, &v)| if v > best.2 { (k / nd, k % nd, v) } else { best })
    }
}

/// Re-anchor the Doppler phasor with an exact exponential this often.
const ANCHOR_EVERY: usize = 1024;

/// Discrete ambiguity function of `waveform`, normalized by the squared
/// energy so `|χ(0, 0)|² = 1`.
///
/// Delays are rounded to the nearest sample; the sum runs over the overlap
/// of `x[n]` and `x[n - lag]` with time `t_n = n / fs`.
pub fn ambiguity<T: Real>(
    waveform: &SampledWaveform<T>,
    delays: &[T],
    dopplers: &[T],
) -> Result<AmbiguitySurface<T>> {
    if delays.is_empty() || dopplers.is_empty() {
        return Err(Error::domain("ambiguity grid must be non-empty"));
    }
    let fs = waveform.fs;
    let half = fs * T::lit(0.5);
    if let Some(f) = dopplers.iter().find(|f| f.abs() > half) {
        return Err(Error::domain(format!("doppler {f} Hz outside ±fs/2")));
    }
    if let Some(t) = delays.iter().find(|t| t.abs() > waveform.duration) {
        return Err(Error::domain(format!("delay {t} s outside ±duration")));
    }

    let x = &waveform.samples;
    let n = x.len() as i64;
    let energy = x.iter().fold(T::zero(), |a, s| a + s.norm_sqr());
    if !(energy > T::zero()) {
        return Err(Error::Degenerate("waveform has zero energy".into()));
    }
    let norm = energy * energy;

    let mut snapped = Vec::with_capacity(delays.len());
    let mut values = Vec::with_capacity(delays.len() * dopplers.len());
    let mut product = Vec::with_capacity(x.len());
    for &tau in delays {
        let lag = (tau * fs).round().to_i64().unwrap_or(0);
        snapped.push(T::from_i64(lag).unwrap_or(T::zero()) / fs);
        let start = lag.max(0);
        let end = n.min(n + lag);
        product.clear();
        product.extend((start..end).map(|k| x[k as usize] * x[(k - lag) as usize].conj()));

        for &fd in dopplers {
            let step = -T::TAU() * fd / fs;
            let mut acc = Complex::new(T::zero(), T::zero());
            for (c, chunk) in product.chunks(ANCHOR_EVERY).enumerate() {
                let k0 = start + (c * ANCHOR_EVERY) as i64;
                let mut rot = Complex::from_polar(T::one(), step * T::from_i64(k0).unwrap_or(T::zero()));
                let w = Complex::from_polar(T::one(), step);
                for p in chunk {
                    acc = acc + p * rot;
                    rot = rot * w;
                }
            }
            values.push(acc.norm_sqr() / norm);
        }
    }

    Ok(AmbiguitySurface { delays: snapped, dopplers: dopplers.to_vec(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveforms::{gen_down_chirp, gen_sinusoid, gen_triangle_lfm, gen_up_chirp, gen_v_lfm};

    fn direct(x: &SampledWaveform<f64>, lag: i64, fd: f64) -> f64 {
        // plain double loop with exact exponentials
        let n = x.samples.len() as i64;
        let mut acc = Complex::new(0.0, 0.0);
        for k in 0..n {
            let j = k - lag;
            if j >= 0 && j < n {
                let ph = -std::f64::consts::TAU * fd * k as f64 / x.fs;
                acc += x.samples[k as usize] * x.samples[j as usize].conj() * Complex::from_polar(1.0, ph);
            }
        }
        let e: f64 = x.samples.iter().map(|s| s.norm_sqr()).sum();
        acc.norm_sqr() / (e * e)
    }

    #[test]
    fn origin_is_unity_for_all_kinds() {
        let (bw, t, fs) = (1e6_f64, 1e-4, 4e6);
        let ws = [
            gen_up_chirp(bw, t, fs, 2.0).unwrap(),
            gen_down_chirp(bw, t, fs, 1.0).unwrap(),
            gen_triangle_lfm(bw, t, fs).unwrap(),
            gen_v_lfm(bw, t, fs).unwrap(),
            gen_sinusoid(1e5, 3.0, t, fs).unwrap(),
        ];
        for w in &ws {
            let s = ambiguity(w, &[0.0], &[0.0]).unwrap();
            assert!((s.values[0] - 1.0).abs() < 1e-6, "{:?}", w.kind);
        }
    }

    #[test]
    fn matches_direct_sum() {
        let w = gen_up_chirp(1e6_f64, 2e-4, 4e6, 1.0).unwrap();
        let mu = w.chirp_rate();
        let delays = [-5e-6, 0.0, 1.25e-5];
        let dops = [-3e4, 0.0, 5e3];
        let s = ambiguity(&w, &delays, &dops).unwrap();
        for (i, &tau) in delays.iter().enumerate() {
            for (j, &fd) in dops.iter().enumerate() {
                let lag = (tau * w.fs).round() as i64;
                assert!((s.value(i, j) - direct(&w, lag, fd)).abs() < 1e-10);
            }
            let lag = (tau * w.fs).round() as i64;
            let ridge = ambiguity(&w, &[tau], &[mu * lag as f64 / w.fs]).unwrap().values[0];
            assert!((ridge - direct(&w, lag, mu * lag as f64 / w.fs)).abs() < 1e-10);
        }
    }

    #[test]
    fn sinusoid_delay_cut_is_triangular() {
        let t = 1e-4;
        let w = gen_sinusoid(2e5, 1.0, t, 4e6).unwrap();
        let delays: Vec<f64> = (-10..=10).map(|k| k as f64 * t / 10.0).collect();
        let s = ambiguity(&w, &delays, &[0.0]).unwrap();
        for (i, tau) in s.delays.iter().enumerate() {
            let expect = (1.0 - tau.abs() / t).powi(2);
            assert!((s.value(i, 0) - expect).abs() < 1e-9, "tau = {tau}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let w = gen_up_chirp(1e6, 1e-4, 4e6, 1.0).unwrap();
        assert!(ambiguity(&w, &[], &[0.0]).is_err());
        assert!(ambiguity(&w, &[0.0], &[]).is_err());
        assert!(ambiguity(&w, &[0.0], &[3e6]).is_err());
        assert!(ambiguity(&w, &[2e-4], &[0.0]).is_err());
    }
}
