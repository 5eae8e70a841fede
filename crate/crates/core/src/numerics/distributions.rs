//! Fading-magnitude samplers and complex Gaussian noise.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::Real;

/// Nakagami-m magnitude: square root of a Gamma(m, Ω/m) draw.
pub fn sample_nakagami<T: Real, R: Rng + ?Sized>(m: T, omega: T, rng: &mut R) -> Result<T> {
    if !(m > T::zero() && omega > T::zero()) {
        return Err(Error::domain(format!("nakagami needs m > 0 and omega > 0, got m={m}, omega={omega}")));
    }
    Ok(T::gamma(m, omega / m, rng).sqrt())
}

/// Rayleigh magnitude with scale `sigma` via inverse-CDF.
pub fn sample_rayleigh<T: Real, R: Rng + ?Sized>(sigma: T, rng: &mut R) -> Result<T> {
    if !(sigma > T::zero()) {
        return Err(Error::domain(format!("rayleigh needs sigma > 0, got {sigma}")));
    }
    let u = T::open_unit(rng);
    Ok(sigma * (-T::lit(2.0) * u.ln()).sqrt())
}

/// Uniform phase on `[0, 2π)`.
#[inline]
pub fn sample_phase<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    (T::one() - T::open_unit(rng)) * T::TAU()
}

/// Circularly-symmetric complex Gaussian with total variance `variance`.
#[inline]
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(variance: T, rng: &mut R) -> Complex<T> {
    let s = (variance * T::lit(0.5)).sqrt();
    Complex::new(s * T::standard_normal(rng), s * T::standard_normal(rng))
}
