//! Gaussian tail probability and its inverse.

use crate::error::{Error, Result};
use crate::Real;

/// Gaussian Q-function, `P(N(0,1) > x)`.
pub fn q_function<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain("q_function needs a finite argument"));
    }
    Ok(q_unchecked(x))
}

#[inline]
pub(crate) fn q_unchecked<T: Real>(x: T) -> T {
    T::lit(0.5) * (x * T::FRAC_1_SQRT_2()).erfc()
}

/// Inverse of [`q_function`]: the `x` with `Q(x) = p`.
///
/// Starts from Acklam's rational approximation of the normal quantile
/// (relative error ~1e-9) and polishes with Halley steps on `Q`.
pub fn inv_q_function<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain(format!("inv_q_function needs 0 < p < 1, got {p}")));
    }
    // Q(x) = p  <=>  Phi(-x) = p
    let pf = p.to_f64_lossy();
    let mut x = -normal_quantile_approx(pf);
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    for _ in 0..3 {
        let err = 0.5 * libm::erfc(x / std::f64::consts::SQRT_2) - pf;
        let pdf = (-0.5 * x * x).exp() / sqrt_2pi;
        if pdf == 0.0 {
            break;
        }
        // Q'(x) = -pdf, Q''(x) = x pdf
        let u = err / -pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    Ok(T::lit(x))
}

/// Acklam's approximation to the standard normal quantile `Phi^{-1}(p)`.
fn normal_quantile_approx(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
