use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussianRational, Ring};

/// Monomial in named symbols: symbol → exponent (exponents are positive).
pub type Monomial = BTreeMap<String, u32>;

/// Multivariate polynomial over `Q(i)` in named parameter symbols.
///
/// Used to push catalog parameters such as `f`, `g` and `λ` through Poisson
/// brackets as formal indeterminates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        Self { terms }
    }

    pub fn symbol(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, GaussianRational::one());
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Symbols that actually occur, in sorted order.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.keys().cloned()).collect()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Substitutes exact values for every symbol.
    pub fn eval(&self, values: &BTreeMap<String, GaussianRational>) -> Option<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (s, e) in m {
                term = &term * &values.get(s)?.pow(*e);
            }
            acc += &term;
        }
        Some(acc)
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, GaussianRational>, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("({c})*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        for (m, c) in rhs.terms {
            Self::insert_term(&mut self.terms, m, c);
        }
        self
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        self + (-rhs)
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                for (s, e) in m2 {
                    *m.entry(s.clone()).or_insert(0) += e;
                }
                Self::insert_term(&mut terms, m, c1 * c2);
            }
        }
        ParamPoly { terms }
    }
}

impl Ring for ParamPoly {
    fn zero() -> Self {
        ParamPoly::zero()
    }
    fn one() -> Self {
        ParamPoly::constant(GaussianRational::one())
    }
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        ParamPoly::constant(c.clone())
    }
}
