//! Shadowed-Rician MIMO fading and the received-signal model.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{complex_gaussian, sample_nakagami, sample_phase, sample_rayleigh};
use crate::Real;

/// Parameters of the shadowed-Rician entry law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowedRician<T> {
    /// Rician factor K, linear.
    pub k_factor: T,
    /// Nakagami shape m of the LoS magnitude.
    pub m: T,
    /// Nakagami spread Ω of the LoS magnitude.
    pub omega: T,
    /// Rayleigh scale σ_R of the NLoS magnitude.
    pub sigma_r: T,
}

impl<T: Real> ShadowedRician<T> {
    pub fn new(k_factor: T, m: T, omega: T, sigma_r: T) -> Result<Self> {
        if !(k_factor >= T::zero()) || !k_factor.is_finite() {
            return Err(Error::domain(format!("Rician factor must be finite and >= 0, got {k_factor}")));
        }
        if !(m > T::zero() && omega > T::zero() && sigma_r > T::zero()) {
            return Err(Error::domain("m, omega and sigma_r must be positive"));
        }
        Ok(ShadowedRician { k_factor, m, omega, sigma_r })
    }

    /// Closed-form `E[|h|²] = (K·Ω + 2σ_R²) / (K + 1)`.
    pub fn mean_power(&self) -> T {
        (self.k_factor * self.omega + T::lit(2.0) * self.sigma_r * self.sigma_r) / (self.k_factor + T::one())
    }

    /// One channel coefficient
    /// `√(K/(K+1))·|h_LoS|·e^{jφ₁} + √(1/(K+1))·|h_NLoS|·e^{jφ₂}`.
    pub fn sample_entry<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex<T> {
        let kp1 = self.k_factor + T::one();
        let los = sample_nakagami(self.m, self.omega, rng).expect("validated");
        let phi1: T = sample_phase(rng);
        let nlos = sample_rayleigh(self.sigma_r, rng).expect("validated");
        let phi2: T = sample_phase(rng);
        Complex::from_polar((self.k_factor / kp1).sqrt() * los, phi1) + Complex::from_polar((T::one() / kp1).sqrt() * nlos, phi2)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n_t: usize, n_r: usize, rng: &mut R) -> ChannelRealization<T> {
        let h = (0..n_r * n_t).map(|_| self.sample_entry(rng)).collect();
        ChannelRealization {
            h,
            n_r,
            n_t,
            law: *self,
            doppler_hz: T::zero(),
            delay_s: T::zero(),
        }
    }
}

/// One draw of the `N_r x N_t` channel matrix and the law that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization<T> {
    /// Row-major: `h[l * n_t + i]` links transmit antenna `i` to receive antenna `l`.
    pub h: Vec<Complex<T>>,
    pub n_r: usize,
    pub n_t: usize,
    pub law: ShadowedRician<T>,
    pub doppler_hz: T,
    pub delay_s: T,
}

impl<T: Real> ChannelRealization<T> {
    /// Wraps an explicit matrix (row-major, `n_r x n_t`).
    pub fn from_matrix(h: Vec<Complex<T>>, n_r: usize, n_t: usize) -> Result<Self> {
        if h.len() != n_r * n_t || n_r == 0 || n_t == 0 {
            return Err(Error::Framing { expected: n_r * n_t, actual: h.len() });
        }
        Ok(ChannelRealization {
            h,
            n_r,
            n_t,
            law: ShadowedRician { k_factor: T::zero(), m: T::one(), omega: T::one(), sigma_r: T::one() },
            doppler_hz: T::zero(),
            delay_s: T::zero(),
        })
    }

    #[inline]
    pub fn entry(&self, rx: usize, tx: usize) -> Complex<T> {
        self.h[rx * self.n_t + tx]
    }

    pub fn column(&self, tx: usize) -> Vec<Complex<T>> {
        (0..self.n_r).map(|l| self.entry(l, tx)).collect()
    }

    /// `H · v` for a real transmit vector.
    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.n_t {
            return Err(Error::Framing { expected: self.n_t, actual: v.len() });
        }
        Ok((0..self.n_r)
            .map(|l| {
                v.iter()
                    .enumerate()
                    .fold(Complex::new(T::zero(), T::zero()), |a, (i, &vi)| a + self.entry(l, i) * vi)
            })
            .collect())
    }

    /// Attaches the propagation Doppler and delay of the link.
    pub fn with_propagation(mut self, doppler_hz: T, delay_s: T) -> Self {
        self.doppler_hz = doppler_hz;
        self.delay_s = delay_s;
        self
    }

    /// Applies the slot-dependent Doppler phase rotation to every entry.
    pub fn at_slot(&self, carrier_hz: T, slot_time_s: T) -> Self {
        let mut out = self.clone();
        for h in &mut out.h {
            *h = time_varying_response(*h, carrier_hz, self.delay_s, slot_time_s);
        }
        out
    }
}

/// Draws a shadowed-Rician channel matrix.
pub fn sample_channel_matrix<T: Real, R: Rng + ?Sized>(
    n_t: usize,
    n_r: usize,
    k_factor: T,
    m: T,
    omega: T,
    sigma_r: T,
    rng: &mut R,
) -> Result<ChannelRealization<T>> {
    if n_t == 0 || n_r == 0 {
        return Err(Error::domain("antenna counts must be positive"));
    }
    Ok(ShadowedRician::new(k_factor, m, omega, sigma_r)?.sample(n_t, n_r, rng))
}

/// `y = √(E_s·PL)·H·v + n`, `n ~ CN(0, N₀ I)`.
pub fn apply_channel<T: Real, R: Rng + ?Sized>(
    channel: &ChannelRealization<T>,
    v: &[T],
    symbol_energy: T,
    path_gain: T,
    noise_var: T,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    if noise_var < T::zero() {
        return Err(Error::domain("noise variance must be non-negative"));
    }
    let gain = (symbol_energy * path_gain).sqrt();
    let mut y = channel.mul_vec(v)?;
    for yl in &mut y {
        *yl = *yl * gain;
        if noise_var > T::zero() {
            *yl = *yl + complex_gaussian(noise_var, rng);
        }
    }
    Ok(y)
}

/// `E_s = (1/N_t)·Σ_k |v_k|²`.
pub fn symbol_energy<T: Real>(vectors: &[Vec<T>], n_t: usize) -> Result<T> {
    if vectors.is_empty() || n_t == 0 {
        return Err(Error::domain("symbol set must be non-empty"));
    }
    let total = vectors.iter().flatten().fold(T::zero(), |a, &x| a + x * x);
    Ok(total / T::from_usize_lossy(n_t))
}

/// Instantaneous per-antenna SNR `|√(E_s·PL)·h + n|² / N₀`.
pub fn instantaneous_snr<T: Real>(h_v: Complex<T>, noise: Complex<T>, symbol_energy: T, path_gain: T, noise_var: T) -> Result<T> {
    if !(noise_var > T::zero()) {
        return Err(Error::domain("instantaneous SNR needs N0 > 0"));
    }
    Ok((h_v * (symbol_energy * path_gain).sqrt() + noise).norm_sqr() / noise_var)
}

/// `h·e^{-j2π f_c τ t}`.
pub fn time_varying_response<T: Real>(h: Complex<T>, carrier_hz: T, delay_s: T, slot_time_s: T) -> Complex<T> {
    let cycles = carrier_hz * delay_s * slot_time_s;
    let frac = cycles - cycles.floor();
    h * Complex::from_polar(T::one(), -T::TAU() * frac)
}
