//! Root-MUSIC frequency estimation.
//!
//! The forward-averaged sample autocorrelation matrix is split into signal
//! and noise subspaces; the noise-subspace polynomial
//! `D(z) = a(1/z)^T · P_noise · a(z)` has its signal roots on (or next to)
//! the unit circle, and their angles give the tone frequencies.

use num_complex::Complex;

use super::spectral::{SpectralEstimate, SpectralMethod};
use crate::error::{Error, Result};
use crate::Real;

/// Smallest autocorrelation order used for a single-tone model.
pub const MIN_CORRELATION_ORDER: usize = 16;

/// Root-MUSIC estimates of `model_order` tone frequencies.
///
/// The correlation order is `max(2·model_order, 16)`, capped at half the
/// input length. Results are sorted by ascending frequency.
pub fn root_music_frequencies<T: Real>(
    samples: &[Complex<T>],
    model_order: usize,
    fs: T,
) -> Result<Vec<SpectralEstimate<T>>> {
    if model_order == 0 {
        return Err(Error::domain("model_order must be >= 1"));
    }
    if samples.len() < 4 * model_order {
        return Err(Error::domain(format!(
            "root-MUSIC needs >= {} samples for model order {model_order}, got {}",
            4 * model_order,
            samples.len()
        )));
    }
    let order = (2 * model_order).max(MIN_CORRELATION_ORDER).min(samples.len() / 2);
    root_music_with_order(samples, model_order, order, fs)
}

/// [`root_music_frequencies`] with an explicit correlation order.
pub fn root_music_with_order<T: Real>(
    samples: &[Complex<T>],
    model_order: usize,
    order: usize,
    fs: T,
) -> Result<Vec<SpectralEstimate<T>>> {
    if order < 2 * model_order || order > samples.len() {
        return Err(Error::domain(format!(
            "correlation order {order} must be in [{}, {}]",
            2 * model_order,
            samples.len()
        )));
    }
    let r = autocorrelation(samples, order);
    let (vals, vecs) = hermitian_eigen(&r, order);

    // eigenvalues ascending; signal subspace is the top `model_order`
    let lmax = vals[order - 1];
    let lsig = vals[order - model_order];
    if !(lmax > T::TINY) || lsig <= lmax * T::epsilon() * T::lit(1e3) {
        return Err(Error::Estimation("rank-deficient autocorrelation matrix".into()));
    }
    let noise_dim = order - model_order;
    let noise_floor = vals[..noise_dim].iter().fold(T::zero(), |a, &v| a + v) / T::from_usize_lossy(noise_dim);

    // noise projector P = En En^H
    let mut proj = vec![Complex::new(T::zero(), T::zero()); order * order];
    for k in 0..noise_dim {
        let v = &vecs[k * order..(k + 1) * order];
        for i in 0..order {
            for j in 0..order {
                proj[i * order + j] = proj[i * order + j] + v[i] * v[j].conj();
            }
        }
    }

    // D(z) z^(order-1): coefficient of z^(d + order - 1) is the sum of the
    // d-th diagonal, d = j - i
    let degree = 2 * (order - 1);
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); degree + 1];
    for i in 0..order {
        for j in 0..order {
            let idx = j + order - 1 - i;
            coeffs[idx] = coeffs[idx] + proj[i * order + j];
        }
    }
    let roots = polynomial_roots(&coeffs)?;

    // candidates on or inside the unit circle, nearest the circle first
    let tol = T::lit(1e-6);
    let mut cands: Vec<Complex<T>> = roots.into_iter().filter(|z| z.norm() <= T::one() + tol).collect();
    cands.sort_by(|a, b| {
        let da = (T::one() - a.norm()).abs();
        let db = (T::one() - b.norm()).abs();
        da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
    });
    let min_sep = T::lit(1e-4);
    let mut picked: Vec<Complex<T>> = Vec::with_capacity(model_order);
    for z in cands {
        if picked.len() == model_order {
            break;
        }
        let clash = picked.iter().any(|p| (z * p.conj()).arg().abs() < min_sep);
        if !clash {
            picked.push(z);
        }
    }
    if picked.len() < model_order {
        return Err(Error::Estimation(format!(
            "found {} signal roots, expected {model_order}",
            picked.len()
        )));
    }

    let ord = T::from_usize_lossy(order);
    let mut out: Vec<SpectralEstimate<T>> = picked
        .into_iter()
        .map(|z| {
            let omega = z.arg();
            let power = (steered_power(&r, order, omega) / (ord * ord) - noise_floor / ord).max(T::zero());
            SpectralEstimate {
                frequency_hz: omega * fs / T::TAU(),
                power,
                method: SpectralMethod::RootMusic,
            }
        })
        .collect();
    out.sort_by(|a, b| a.frequency_hz.partial_cmp(&b.frequency_hz).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// Forward-averaged autocorrelation `R[i][j] = mean_n x[n+i] conj(x[n+j])`
/// over all `N - order + 1` snapshots, row-major.
pub(crate) fn autocorrelation<T: Real>(x: &[Complex<T>], order: usize) -> Vec<Complex<T>> {
    let n = x.len();
    let snaps = n - order + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let mut r = vec![zero; order * order];
    for d in 0..order {
        // running sum along the d-th superdiagonal
        let mut acc = (0..snaps).fold(zero, |a, k| a + x[k] * x[k + d].conj());
        r[d] = acc;
        for i in 1..order - d {
            acc = acc - x[i - 1] * x[i - 1 + d].conj() + x[snaps + i - 1] * x[snaps + i - 1 + d].conj();
            r[i * order + i + d] = acc;
        }
    }
    let scale = T::one() / T::from_usize_lossy(snaps);
    for i in 0..order {
        for j in i..order {
            let v = r[i * order + j] * scale;
            r[i * order + j] = v;
            r[j * order + i] = v.conj();
        }
    }
    r
}

fn steered_power<T: Real>(r: &[Complex<T>], order: usize, omega: T) -> T {
    let a: Vec<Complex<T>> = (0..order)
        .map(|k| Complex::from_polar(T::one(), omega * T::from_usize_lossy(k)))
        .collect();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..order {
        for j in 0..order {
            acc = acc + a[i].conj() * r[i * order + j] * a[j];
        }
    }
    acc.re
}

/// Eigen-decomposition of a Hermitian `n x n` matrix.
///
/// Returns eigenvalues ascending and the matching unit eigenvectors, each
/// stored contiguously. Works on the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is the Hermitian spectrum with
/// every eigenvalue doubled; one vector of each pair is kept.
pub(crate) fn hermitian_eigen<T: Real>(h: &[Complex<T>], n: usize) -> (Vec<T>, Vec<Complex<T>>) {
    let m = 2 * n;
    let mut a = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let (vals, vecs) = symmetric_eigen(a, m);

    // Walk the doubled spectrum in ascending order and Gram-Schmidt the
    // complexified vectors, keeping n orthonormal ones.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs: Vec<Complex<T>> = Vec::with_capacity(n * n);
    for &k in &order {
        if out_vals.len() == n {
            break;
        }
        let mut v: Vec<Complex<T>> = (0..n).map(|i| Complex::new(vecs[i * m + k], vecs[(i + n) * m + k])).collect();
        for q in 0..out_vals.len() {
            let basis = &out_vecs[q * n..(q + 1) * n];
            let dot = basis.iter().zip(&v).fold(Complex::new(T::zero(), T::zero()), |a, (b, x)| a + b.conj() * x);
            for (x, b) in v.iter_mut().zip(basis) {
                *x = *x - *b * dot;
            }
        }
        let norm = v.iter().fold(T::zero(), |a, x| a + x.norm_sqr()).sqrt();
        if norm < T::lit(0.5) {
            // the partner of an already accepted vector
            continue;
        }
        out_vecs.extend(v.into_iter().map(|x| x / norm));
        out_vals.push(vals[k]);
    }
    (out_vals, out_vecs)
}

/// Cyclic Jacobi eigen-solver for a real symmetric `n x n` matrix.
/// Returns eigenvalues and the eigenvector matrix (columns).
fn symmetric_eigen<T: Real>(mut a: Vec<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let frob = a.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[i * n + j] * a[i * n + j])
            .sqrt();
        if off <= T::epsilon() * frob || off <= T::TINY {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= T::TINY {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// All roots of `sum_k coeffs[k] z^k` by Aberth-Ehrlich iteration.
pub(crate) fn polynomial_roots<T: Real>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    if !(scale > T::TINY) {
        return Err(Error::Estimation("zero polynomial".into()));
    }
    // trim negligible leading terms
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= scale * T::epsilon() {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let c: Vec<Complex<T>> = coeffs[..=deg].iter().map(|x| x / lead).collect();

    // Cauchy-style radius for the initial circle
    let radius = c[..deg].iter().fold(T::zero(), |m, x| m.max(x.norm())).powf(T::one() / T::from_usize_lossy(deg)).max(T::lit(0.5));
    let mut z: Vec<Complex<T>> = (0..deg)
        .map(|k| {
            let ang = T::TAU() * (T::from_usize_lossy(k) + T::lit(0.25)) / T::from_usize_lossy(deg) + T::lit(0.4);
            Complex::from_polar(radius, ang)
        })
        .collect();

    let eval = |x: Complex<T>| -> (Complex<T>, Complex<T>) {
        let mut p = c[deg];
        let mut dp = Complex::new(T::zero(), T::zero());
        for k in (0..deg).rev() {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        (p, dp)
    };

    for _ in 0..1000 {
        let mut max_step = T::zero();
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == T::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex::new(T::zero(), T::zero()), |s, j| s + Complex::new(T::one(), T::zero()) / (z[i] - z[j]));
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * repulsion);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i] - w;
                max_step = max_step.max(w.norm() / z[i].norm().max(T::one()));
            }
        }
        if max_step <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    Ok(z)
}
