use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::GaussianRational;

/// Dense univariate polynomial in `t` over `Q(i)`.
///
/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·t^k`.
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn t() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_integer(k as i64))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let sub = &c * d;
                rem[k + j] -= &sub;
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact division; the caller guarantees `divisor | self`.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        if divisor.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.is_constant() && !a.is_zero() || b.is_constant() && !b.is_zero() {
            return Poly::one();
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_complex64())
    }

    pub fn eval_exact(&self, t: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * t) + c)
    }

    /// Splits `p = re(t) + i·im(t)` into its real-coefficient parts.
    pub fn real_imag_parts(&self) -> (Poly, Poly) {
        let re = self.coeffs.iter().map(|c| GaussianRational::real(c.re().clone())).collect();
        let im = self.coeffs.iter().map(|c| GaussianRational::real(c.im().clone())).collect();
        (Poly::new(re), Poly::new(im))
    }

    pub(crate) fn fmt_with_var(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let simple_real = c.is_real();
            let negative = simple_real && c.re() < &num_rational::BigRational::from_integer(0.into());
            let mag = if negative { -c } else { c.clone() };
            if !first {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            } else if negative {
                write!(f, "-")?;
            }
            first = false;
            let coeff_str = if simple_real { mag.to_string() } else { format!("({mag})") };
            if k == 0 {
                write!(f, "{coeff_str}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff_str}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var("t", f)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o += c;
        }
        Poly::new(out)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
