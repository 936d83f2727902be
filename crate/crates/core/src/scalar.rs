//! Scalar abstraction shared by every numeric module.

use std::fmt;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar the engine is generic over.
///
/// Implemented for `f32` and `f64`. Literal constants are lifted through
/// [`Real::lit`], which goes through `num-traits` so that the conversion is
/// explicit at every call site.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Lifts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and CSV output.
    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn is_finite_real(self) -> bool {
        self.as_f64().is_finite()
    }

    /// Tolerance `x`, widened to a few ulps where the type cannot resolve it.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::default_epsilon() * Self::lit(64.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
