//! Scalar abstraction shared by every numerical routine in the crate.

use num_traits::{Float, FloatConst};
use rustfft::FftNum;
use std::fmt::{Debug, Display, LowerExp};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Everything in the crate is generic over this trait. The tolerances quoted
/// in the documentation and tests assume `f64`.
pub trait Real:
    Float + FloatConst + FftNum + Default + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// (2π)³, the Fourier volume factor.
    fn two_pi_cubed() -> Self {
        let tp = Self::TAU();
        tp * tp * tp
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
