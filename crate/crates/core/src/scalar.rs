//! Scalar abstraction: all numeric kernels are generic over the float type.
//!
//! The stated accuracy targets (special functions to ≤ 1e−12, boundary
//! tolerances around 1e−9) hold for the `f64` instantiation; `f32` is
//! available for cheap exploratory sweeps.

use core::fmt::{Debug, Display};
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar the library is generic over.
///
/// Algorithm constants are written as `f64` literals and converted once at
/// the use site via [`Real::lit`].
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in every Real type")
    }

    /// Convert a count into `Self`.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in every Real type")
    }

    /// Lossy view as `f64`, for diagnostics and error messages.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
