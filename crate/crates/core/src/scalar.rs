//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All signal-level math is written against [`Real`], which is implemented
//! for `f32` and `f64`. The experiment harness and CLI are pinned to `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rustfft::FftNum;

/// Floating point scalar usable by the simulator: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + Send + Sync + 'static
{
    /// Machine epsilon scaled for "effectively zero" comparisons.
    const TINY: Self;

    /// Complementary error function.
    fn erfc(self) -> Self;

    /// One draw from N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One draw from Gamma(shape, scale). Parameters must be positive.
    fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self;

    /// One draw from Uniform(0, 1], never exactly zero.
    fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from a literal. Every `f64` is representable (with
    /// rounding) in both implementors, so this never fails.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }
}

macro_rules! impl_real {
    ($t:ty, $erfc:path, $tiny:expr) => {
        impl Real for $t {
            const TINY: Self = $tiny;

            #[inline]
            fn erfc(self) -> Self {
                $erfc(self)
            }

            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self {
                Gamma::new(shape, scale)
                    .expect("gamma parameters validated by caller")
                    .sample(rng)
            }

            #[inline]
            fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                1.0 - rng.random::<$t>()
            }
        }
    };
}

impl_real!(f32, libm::erfcf, 1e-30);
impl_real!(f64, libm::erfc, 1e-200);
