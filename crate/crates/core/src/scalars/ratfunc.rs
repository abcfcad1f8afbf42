use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Field, GaussianRational, Poly, Ring};
use crate::error::{Error, Result};

/// Denominator magnitude below which evaluation reports a pole.
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-12;

/// Rational function `num/den` in `t` over `Q(i)`.
///
/// Always kept canonical: `den` monic, `gcd(num, den) = 1`, and zero stored as
/// `0/1`, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            return Self { num, den };
        }
        let inv = lead.inv().expect("nonzero");
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_integer(v: i64) -> Self {
        Self::constant(GaussianRational::from_integer(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this function does not depend on `t`.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.inv().ok_or(Error::DivisionByZero)? } else { self.clone() };
        Ok(Self { num: base.num.pow(e.unsigned_abs()), den: base.den.pow(e.unsigned_abs()) })
    }

    /// `d/dt` by the quotient rule.
    pub fn derivative(&self) -> Self {
        if self.is_constant() {
            return Self::zero();
        }
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(num, &self.den * &self.den)
    }

    /// Horner evaluation of `num(t0)/den(t0)` with the default pole threshold.
    pub fn eval(&self, t0: Complex64) -> Result<Complex64> {
        self.eval_with_threshold(t0, DEFAULT_POLE_THRESHOLD)
    }

    pub fn eval_with_threshold(&self, t0: Complex64, threshold: f64) -> Result<Complex64> {
        let d = self.den.eval(t0);
        if d.norm() < threshold {
            return Err(Error::PoleAt(t0));
        }
        Ok(self.num.eval(t0) / d)
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval_exact(&self, t0: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval_exact(t0);
        d.inv().map(|di| &self.num.eval_exact(t0) * &di)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num_atomic = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
            && self.num.coeffs().last().map_or(true, |c| c.is_real());
        if self.den.is_one() {
            return self.num.fmt_with_var("t", f);
        }
        if num_atomic {
            self.num.fmt_with_var("t", f)?;
        } else {
            write!(f, "(")?;
            self.num.fmt_with_var("t", f)?;
            write!(f, ")")?;
        }
        let den_atomic = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if den_atomic {
            write!(f, "/")?;
            self.den.fmt_with_var("t", f)
        } else {
            write!(f, "/(")?;
            self.den.fmt_with_var("t", f)?;
            write!(f, ")")
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::normalized(num, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), gcd(a·d' + c·b', b·d') = gcd(·, g).
        let g = self.den.gcd(&rhs.den);
        let b1 = self.den.div_exact(&g);
        let d1 = rhs.den.div_exact(&g);
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        let den = &self.den * &d1;
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = num.gcd(&g);
        if h.is_one() {
            RatFunc::with_monic_den(num, den)
        } else {
            RatFunc::with_monic_den(num.div_exact(&h), den.div_exact(&h))
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.div_exact(&g1) * &rhs.num.div_exact(&g2);
        let den = &self.den.div_exact(&g2) * &rhs.den.div_exact(&g1);
        RatFunc::with_monic_den(num, den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<GaussianRational> for RatFunc {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        RatFunc::constant(c.clone())
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn sum_over_common_denominator() {
        assert_eq!(&rf("t") + &rf("1/t"), rf("(t^2+1)/t"));
        assert_eq!(rf("(t^2+1)/t").to_string(), "(t^2+1)/t");
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&rf("t-1") * &rf("t+1"), rf("t^2-1"));
    }

    #[test]
    fn self_quotient_is_one() {
        let f = rf("(3/2+1/2*i)*t^2/(t-3)");
        assert_eq!(f.checked_div(&f).unwrap(), RatFunc::one());
        assert!(matches!(f.checked_div(&RatFunc::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn derivatives() {
        assert_eq!(rf("t^2").derivative(), rf("2*t"));
        assert_eq!(rf("1/t").derivative(), rf("-1/t^2"));
        assert_eq!(rf("(t+i)/(t-i)").derivative(), rf("-2*i/(t-i)^2"));
    }

    #[test]
    fn evaluation() {
        let v = rf("(t^2+1)/(t-3)").eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(rf("1/t").eval(Complex64::new(0.0, 0.0)), Err(Error::PoleAt(_))));
        let v = rf("t").eval(Complex64::new(2.0, 1.0)).unwrap();
        assert_eq!(v, Complex64::new(2.0, 1.0));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let f = rf("1/(2*t+4)");
        assert!(f.den().leading().unwrap().is_one());
        assert_eq!(f, rf("(1/2)/(t+2)"));
    }
}
