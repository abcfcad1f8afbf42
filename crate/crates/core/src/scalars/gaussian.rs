use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Ring};

/// Exact element `re + im·i` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    /// `num/den` as a real rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_real() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact square root in `Q(i)` when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rational_sqrt(&self.re).map(Self::real);
            }
            return rational_sqrt(&-self.re.clone()).map(|r| Self::new(BigRational::zero(), r));
        }
        // (x + iy)² = a + ib  =>  x² = (a + |z|)/2, y = b / 2x
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let y = &self.im / (&two * &x);
        Some(Self::new(x, y))
    }

    /// Total order on `(re, im)`; used only to make choices deterministic.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Integer value when this is a real integer that fits in `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(v: &BigInt) -> Option<BigInt> {
    let s = v.sqrt();
    if &(&s * &s) == v {
        Some(s)
    } else {
        None
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if (-self.im.clone()).is_one() {
            write!(f, "-i")
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; use [`GaussianRational::inv`] to check.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero in Q(i)")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        c.clone()
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
}
