//! Scalar abstraction for the numeric kernels.
//!
//! Detection filters, planners, the trajectory optimizer, and the forest are
//! generic over [`Scalar`] so they run on `f32` or `f64`. The simulator
//! instantiates everything at [`crate::Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + std::iter::Sum + Debug + Display + Default + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + std::iter::Sum
        + Debug
        + Display
        + Default
        + 'static
{
}

/// Cast a finite f64 literal into the working scalar.
#[inline]
pub fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite literal representable in scalar type")
}

/// Cast the working scalar to f64 for reporting.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}
