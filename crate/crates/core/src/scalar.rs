//! Scalar traits the rest of the crate is generic over.
//!
//! Series coefficients are `Complex<T>` for a real floating type `T`
//! (`f32` or `f64`). The symbolic dense-set vectors in [`crate::fhc`] only need
//! field arithmetic, so they are generic over [`FieldScalar`], which is also
//! implemented for exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, One, ToPrimitive, Zero};

/// Real floating-point type backing complex coefficients.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; literals and tolerances go through here.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    /// `n` as a real number.
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("integer is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number `re + i·im` in the scalar type `T`.
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Real number lifted to a complex value.
pub fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Field arithmetic plus the two hooks the exact ladder calculus needs.
pub trait FieldScalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_count(n: u64) -> Self;

    /// Equality up to relative tolerance `rel`; exact types ignore `rel`.
    fn close_to(&self, other: &Self, rel: f64) -> bool;

    /// Magnitude as `f64`, used only for reporting.
    fn magnitude(&self) -> f64;
}

impl<T: Real> FieldScalar for T {
    fn from_count(n: u64) -> Self {
        T::of_u64(n)
    }
    fn close_to(&self, other: &Self, rel: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(T::min_positive_value());
        ((*self - *other).abs() / scale)
            .to_f64()
            .unwrap_or(f64::INFINITY)
            <= rel
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl<T: Real> FieldScalar for Complex<T> {
    fn from_count(n: u64) -> Self {
        cr(T::of_u64(n))
    }
    fn close_to(&self, other: &Self, rel: f64) -> bool {
        let scale = self.norm().max(other.norm()).max(T::min_positive_value());
        ((*self - *other).norm() / scale)
            .to_f64()
            .unwrap_or(f64::INFINITY)
            <= rel
    }
    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl FieldScalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn close_to(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }
    fn magnitude(&self) -> f64 {
        let v = self.to_f64().unwrap_or(f64::INFINITY);
        v.abs()
    }
}

impl FieldScalar for Ratio<i128> {
    fn from_count(n: u64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn close_to(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }
    fn magnitude(&self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
}
