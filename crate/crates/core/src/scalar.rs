//! Floating-point abstraction the rest of the crate is generic over.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Scalar type for all simulation and analysis routines (`f32` or `f64`).
///
/// Normal variates are produced through this trait so that the crate has a
/// single, documented Gaussian source: the ziggurat sampler of `rand_distr`.
/// A fixed generator state therefore yields the same variate sequence no
/// matter which module asks for it.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Draws a standard normal variate (ziggurat).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draws a uniform variate on `[0, 1)`.
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite constants used in this crate.
pub fn cast<T: Scalar>(value: f64) -> T {
    T::from_f64(value).expect("finite f64 constant must convert to the scalar type")
}

/// Converts a `usize` into the working scalar type.
pub fn cast_usize<T: Scalar>(value: usize) -> T {
    T::from_usize(value).expect("usize must convert to the scalar type")
}
