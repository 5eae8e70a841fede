//! Space shift keying: a group of `log2(N_t)` bits selects which single
//! transmit antenna is active. Mapping is big-endian natural binary.

use crate::error::{Error, Result};

/// One SSK symbol: the bit group, the active antenna and its selection vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SskSymbol {
    pub bits: Vec<u8>,
    pub antenna_index: usize,
    n_t: usize,
}

impl SskSymbol {
    pub fn num_antennas(&self) -> usize {
        self.n_t
    }

    /// Column `k` of the `N_t x N_t` identity.
    pub fn selection_vector(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.n_t];
        e[self.antenna_index] = 1.0;
        e
    }
}

/// `log2(N_t)`; `N_t` must be a power of two no smaller than 2.
pub fn bits_per_symbol(n_t: usize) -> Result<usize> {
    if n_t < 2 || !n_t.is_power_of_two() {
        return Err(Error::Config(format!("antenna count must be a power of two >= 2, got {n_t}")));
    }
    Ok(n_t.trailing_zeros() as usize)
}

pub fn map_bits(bits: &[u8], n_t: usize) -> Result<SskSymbol> {
    let width = bits_per_symbol(n_t)?;
    if bits.len() != width {
        return Err(Error::Framing { expected: width, actual: bits.len() });
    }
    let mut k = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(Error::domain(format!("bit values must be 0 or 1, got {b}")));
        }
        k = (k << 1) | b as usize;
    }
    Ok(SskSymbol { bits: bits.to_vec(), antenna_index: k, n_t })
}

pub fn demap_index(k: usize, n_t: usize) -> Result<Vec<u8>> {
    let width = bits_per_symbol(n_t)?;
    if k >= n_t {
        return Err(Error::domain(format!("antenna index {k} out of range for {n_t} antennas")));
    }
    Ok((0..width).rev().map(|shift| ((k >> shift) & 1) as u8).collect())
}
