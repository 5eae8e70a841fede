//! Ground-station detection: received-power weighting, coherent maximum
//! likelihood antenna-index detection, and the pairwise error probability.

use num_complex::Complex;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::numerics::q_function;
use crate::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionResult<T> {
    /// `argmin` of `metric_values`, lowest index on ties.
    pub detected_index: usize,
    /// Squared Euclidean distance to each candidate antenna.
    pub metric_values: Vec<T>,
    pub weighted_input: Vec<Complex<T>>,
}

/// Diagonal weights `w_i = P_r(i) / max(P_r)`.
pub fn adaptive_weights<T: Real>(powers: &[T]) -> Result<Vec<T>> {
    if powers.iter().any(|&p| !(p >= T::zero()) || !p.is_finite()) {
        return Err(Error::domain("received powers must be finite and non-negative"));
    }
    let max = powers.iter().fold(T::zero(), |m, &p| m.max(p));
    if !(max > T::zero()) {
        return Err(Error::Degenerate("all received powers are zero".into()));
    }
    Ok(powers.iter().map(|&p| if p == max { T::one() } else { p / max }).collect())
}

/// Weights from the instantaneous per-antenna power `|y_i|²`.
pub fn instantaneous_weights<T: Real>(y: &[Complex<T>]) -> Result<Vec<T>> {
    adaptive_weights(&y.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>())
}

/// `W · y` for diagonal `W`.
pub fn apply_weights<T: Real>(weights: &[T], y: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if weights.len() != y.len() {
        return Err(Error::Framing { expected: y.len(), actual: weights.len() });
    }
    Ok(weights.iter().zip(y).map(|(&w, &c)| c * w).collect())
}

/// Coherent ML detection of the active antenna:
/// `argmin_k ‖y_w − √(E_s·PL)·H·e_k‖²`.
pub fn ml_detect<T: Real>(
    y_weighted: &[Complex<T>],
    channel: &ChannelRealization<T>,
    symbol_energy: T,
    path_gain: T,
) -> Result<DetectionResult<T>> {
    if y_weighted.len() != channel.n_r {
        return Err(Error::Framing { expected: channel.n_r, actual: y_weighted.len() });
    }
    let gain = (symbol_energy * path_gain).sqrt();
    let metric_values: Vec<T> = (0..channel.n_t)
        .map(|k| {
            y_weighted
                .iter()
                .enumerate()
                .fold(T::zero(), |a, (l, &y)| a + (y - channel.entry(l, k) * gain).norm_sqr())
        })
        .collect();
    Ok(DetectionResult { detected_index: argmin(&metric_values), metric_values, weighted_input: y_weighted.to_vec() })
}

/// ML detection with the weights applied to both the observation and the
/// model term: `argmin_k Σ_l w_l²·|y_l − √(E_s·PL)·h_{l,k}|²`.
pub fn ml_detect_weighted<T: Real>(
    y: &[Complex<T>],
    weights: &[T],
    channel: &ChannelRealization<T>,
    symbol_energy: T,
    path_gain: T,
) -> Result<DetectionResult<T>> {
    if y.len() != channel.n_r {
        return Err(Error::Framing { expected: channel.n_r, actual: y.len() });
    }
    let y_w = apply_weights(weights, y)?;
    let gain = (symbol_energy * path_gain).sqrt();
    let metric_values: Vec<T> = (0..channel.n_t)
        .map(|k| {
            y_w.iter()
                .zip(weights)
                .enumerate()
                .fold(T::zero(), |a, (l, (&yw, &w))| a + (yw - channel.entry(l, k) * gain * w).norm_sqr())
        })
        .collect();
    Ok(DetectionResult { detected_index: argmin(&metric_values), metric_values, weighted_input: y_w })
}

fn argmin<T: Real>(values: &[T]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, T::infinity()), |best, (k, &m)| if m < best.1 { (k, m) } else { best })
        .0
}

/// Monte Carlo estimate of `E[Q(√(E_s·PL/2·‖H(v − v̂)‖²))]` over channels
/// produced by `sampler`, with unit noise variance.
pub fn pairwise_ep_theoretical<T: Real, F>(
    mut sampler: F,
    v: &[T],
    v_hat: &[T],
    symbol_energy: T,
    path_gain: T,
    n_samples: usize,
) -> Result<T>
where
    F: FnMut() -> ChannelRealization<T>,
{
    if v.len() != v_hat.len() {
        return Err(Error::Framing { expected: v.len(), actual: v_hat.len() });
    }
    if v.iter().zip(v_hat).all(|(a, b)| a == b) {
        return Err(Error::domain("pairwise error needs distinct transmit vectors"));
    }
    if n_samples < 1000 {
        return Err(Error::domain("pairwise error needs at least 1000 channel samples"));
    }
    let diff: Vec<T> = v.iter().zip(v_hat).map(|(&a, &b)| a - b).collect();
    let half = symbol_energy * path_gain * T::lit(0.5);
    let mut acc = T::zero();
    for _ in 0..n_samples {
        let h = sampler();
        let d2 = h.mul_vec(&diff)?.iter().fold(T::zero(), |a, c| a + c.norm_sqr());
        acc = acc + q_function((half * d2).sqrt())?;
    }
    Ok(acc / T::from_usize_lossy(n_samples))
}

/// Hamming distance between two bit sequences.
pub fn count_bit_errors(truth: &[u8], detected: &[u8]) -> Result<usize> {
    if truth.len() != detected.len() {
        return Err(Error::Framing { expected: truth.len(), actual: detected.len() });
    }
    Ok(truth.iter().zip(detected).filter(|(a, b)| a != b).count())
}
