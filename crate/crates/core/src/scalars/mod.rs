//! Exact arithmetic tower.
//!
//! Gaussian rationals stand in for the constant field, [`RatFunc`] for the
//! coefficient field of time-dependent systems, and [`ParamPoly`] carries
//! named symbolic parameters (`f`, `g`, `λ`, ...) through catalog checks.

mod gaussian;
mod parampoly;
mod parse;
mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use gaussian::GaussianRational;
pub use parampoly::ParamPoly;
pub use parse::parse_ratfunc;
pub use poly::Poly;
pub use ratfunc::{RatFunc, DEFAULT_POLE_THRESHOLD};

/// Commutative ring with unit, exact equality and an embedding of `Q(i)`.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_gaussian(c: &GaussianRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_integer(v))
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

/// Rings whose elements may depend on the time variable.
pub trait TimeDerivative: Ring {
    fn time_derivative(&self) -> Self;
}

impl TimeDerivative for GaussianRational {
    fn time_derivative(&self) -> Self {
        GaussianRational::zero()
    }
}

impl TimeDerivative for RatFunc {
    fn time_derivative(&self) -> Self {
        self.derivative()
    }
}
