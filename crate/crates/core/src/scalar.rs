//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type underlying all complex arithmetic: `f32` or `f64`.
///
/// The associated tolerances are the defaults used when validating states and
/// channels and when truncating series; they scale with the machine epsilon of
/// the type.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default tolerance for density-matrix and CPTP invariants.
    const STATE_TOL: f64;
    /// Default relative accuracy of the matrix exponential.
    const EXP_TOL: f64;

    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const STATE_TOL: f64 = 1e-10;
    const EXP_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const STATE_TOL: f64 = 1e-4;
    const EXP_TOL: f64 = 1e-6;
}

/// Complex amplitude over a [`Real`] base.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
