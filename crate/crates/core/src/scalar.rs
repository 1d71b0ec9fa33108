//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating point type the solvers and checkers are generic over.
///
/// Implemented for `f32` and `f64`. Reports and serialized output always
/// go through `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + FftNum + Default + Display + Debug + Sum + Send + Sync + 'static
{
    /// Literal conversion; panics only if `x` is not representable at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(<f64 as Real>::lit(0.25), 0.25);
        assert_eq!(<f32 as Real>::lit(0.5).as_f64(), 0.5);
        assert_eq!(<f64 as Real>::from_usize_lossy(7), 7.0);
    }
}
