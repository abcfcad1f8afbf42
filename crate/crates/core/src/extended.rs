//! The autonomous lift `Ĥ = H + h`, with `t` and the dissipation variable `h`
//! as an extra conjugate pair.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::RatFunc;
use crate::symplectic::{coord_name, motion_matrix, QuadraticHamiltonian};

/// Highest total degree in `(x, y, h)` an [`ExtendedPoly`] may carry.
pub const DEGREE_CAP: usize = 3;

/// Polynomial in `(x₁..x_n, y₁..y_n, h)` with coefficients in `Q(i)(t)`.
///
/// Exponent vectors have length `2n + 1`, the last entry being the power of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, RatFunc>,
}

/// Variables of the extended phase space, in `(x, y, t, h)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtVar {
    /// `x_i` for `k < n`, `y_{k−n}` otherwise.
    Coord(usize),
    T,
    H,
}

impl ExtendedPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient-only polynomial.
    pub fn constant(n: usize, c: RatFunc) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; 2 * n + 1], c);
        p
    }

    /// The time variable `t` as a function on the extended space.
    pub fn t(n: usize) -> Self {
        Self::constant(n, RatFunc::t())
    }

    /// The dissipation variable `h`.
    pub fn h(n: usize) -> Self {
        let mut e = vec![0; 2 * n + 1];
        e[2 * n] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, RatFunc::one());
        p
    }

    pub fn from_quadratic(f: &QuadraticHamiltonian<RatFunc>) -> Self {
        let n = f.n();
        let mut p = Self::zero(n);
        for ((i, j), c) in f.monomials() {
            let mut e = vec![0; 2 * n + 1];
            e[i] += 1;
            e[j] += 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as usize).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    /// Product; exceeding [`DEGREE_CAP`] is an error.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let deg = if self.is_zero() || other.is_zero() { 0 } else { self.degree() + other.degree() };
        if deg > DEGREE_CAP {
            return Err(Error::DegreeCap(deg));
        }
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn partial(&self, v: ExtVar) -> Self {
        let mut out = Self::zero(self.n);
        let k = match v {
            ExtVar::T => {
                for (e, c) in &self.terms {
                    out.add_term(e.clone(), c.derivative());
                }
                return out;
            }
            ExtVar::Coord(k) => {
                assert!(k < 2 * self.n, "coordinate index {k} out of range for n = {}", self.n);
                k
            }
            ExtVar::H => 2 * self.n,
        };
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            out.add_term(e2, c * &RatFunc::from_integer(e[k] as i64));
        }
        out
    }

    /// Value on `x = y = 0, h = 0`: the constant term.
    pub fn at_origin(&self) -> RatFunc {
        self.terms.get(&vec![0; 2 * self.n + 1]).cloned().unwrap_or_else(RatFunc::zero)
    }
}

impl fmt::Display for ExtendedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut vars = Vec::new();
                for (k, &p) in e.iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    let name = if k == 2 * self.n { "h".to_string() } else { coord_name(self.n, k, "x", "y") };
                    vars.push(if p == 1 { name } else { format!("{name}^{p}") });
                }
                match (vars.is_empty(), c.to_string().as_str()) {
                    (true, cs) => format!("({cs})"),
                    (false, "1") => vars.join("*"),
                    (false, cs) => format!("({cs})*{}", vars.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Ĥ = H + h`.
pub fn extend(h: &QuadraticHamiltonian<RatFunc>) -> ExtendedPoly {
    ExtendedPoly::from_quadratic(h).add(&ExtendedPoly::h(h.n()))
}

/// `{F, G}_ext = Σ (F_{x_i}G_{y_i} − F_{y_i}G_{x_i}) + F_t G_h − F_h G_t`.
pub fn extended_bracket(f: &ExtendedPoly, g: &ExtendedPoly) -> Result<ExtendedPoly> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(format!("extended bracket of n={} and n={}", f.n, g.n)));
    }
    let n = f.n;
    let mut acc = ExtendedPoly::zero(n);
    for i in 0..n {
        let (x, y) = (ExtVar::Coord(i), ExtVar::Coord(n + i));
        acc = acc.add(&f.partial(x).mul(&g.partial(y))?);
        acc = acc.sub(&f.partial(y).mul(&g.partial(x))?);
    }
    acc = acc.add(&f.partial(ExtVar::T).mul(&g.partial(ExtVar::H))?);
    acc = acc.sub(&f.partial(ExtVar::H).mul(&g.partial(ExtVar::T))?);
    Ok(acc)
}

/// `{Ĥ, F₁}_ext = {Ĥ, F₂}_ext = {F₁, F₂}_ext = 0`.
pub fn check_extended_involution(
    h: &QuadraticHamiltonian<RatFunc>,
    f1: &QuadraticHamiltonian<RatFunc>,
    f2: &QuadraticHamiltonian<RatFunc>,
) -> Result<bool> {
    let hh = extend(h);
    let (a, b) = (ExtendedPoly::from_quadratic(f1), ExtendedPoly::from_quadratic(f2));
    Ok(extended_bracket(&hh, &a)?.is_zero()
        && extended_bracket(&hh, &b)?.is_zero()
        && extended_bracket(&a, &b)?.is_zero())
}

fn var_of(n: usize, idx: usize) -> ExtVar {
    match idx {
        k if k < 2 * n => ExtVar::Coord(k),
        k if k == 2 * n => ExtVar::T,
        _ => ExtVar::H,
    }
}

/// Linearization of the extended vector field along `x = y = 0, h = 0`, in
/// `(ξ, η, τ, χ)` order.
pub fn variational_matrix(h: &QuadraticHamiltonian<RatFunc>) -> Mat<RatFunc> {
    let n = h.n();
    let hh = extend(h);
    let size = 2 * n + 2;
    // components of the extended field: ẋ = Ĥ_y, ẏ = −Ĥ_x, ṫ = Ĥ_h, ḣ = −Ĥ_t
    let field: Vec<ExtendedPoly> = (0..size)
        .map(|r| match var_of(n, r) {
            ExtVar::Coord(k) if k < n => hh.partial(ExtVar::Coord(n + k)),
            ExtVar::Coord(k) => hh.partial(ExtVar::Coord(k - n)).neg(),
            ExtVar::T => hh.partial(ExtVar::H),
            ExtVar::H => hh.partial(ExtVar::T).neg(),
        })
        .collect();
    Mat::from_fn(size, size, |r, w| field[r].partial(var_of(n, w)).at_origin())
}

/// Drops the `τ` and `χ` rows and columns; the result must be the motion
/// matrix of `H` itself.
pub fn normal_variational(ve: &Mat<RatFunc>, h: &QuadraticHamiltonian<RatFunc>) -> Result<Mat<RatFunc>> {
    let size = 2 * h.n();
    if ve.rows() != size + 2 || ve.cols() != size + 2 {
        return Err(Error::DimensionMismatch(format!("variational matrix of size {} for n = {}", ve.rows(), h.n())));
    }
    let normal = ve.block(0, 0, size, size);
    if normal != motion_matrix(h) {
        return Err(Error::LemmaViolation("normal variational equation differs from the motion matrix".into()));
    }
    Ok(normal)
}
