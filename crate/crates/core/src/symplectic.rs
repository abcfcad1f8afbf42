//! The matrix `J`, sp/Sp membership, quadratic Hamiltonians and the
//! dictionary between quadratic forms and Hamiltonian matrices.
//!
//! Coordinates are ordered `(x_1, …, x_n, y_1, …, y_n)`. A quadratic form
//! `H = ½ xᵗAx + ½ yᵗBy + xᵗCy` has Hessian `S = ((A, C), (Cᵗ, B))` and
//! Hamiltonian matrix `M = J·S = ((Cᵗ, B), (−A, −C))`. With this orientation
//! `M_{F,G} = [M_F, M_G]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{GaussianRational, RatFunc, Ring};

/// `J = ((0, I), (−I, 0))` of size `2n`.
pub fn standard_j<S: Ring>(n: usize) -> Mat<S> {
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            S::one()
        } else if i == j + n {
            -S::one()
        } else {
            S::zero()
        }
    })
}

/// `MᵗJ + JM = 0`.
pub fn is_hamiltonian_matrix<S: Ring>(m: &Mat<S>) -> Result<bool> {
    let n = m.check_even_square()?;
    let j = standard_j::<S>(n);
    Ok((&(&m.transpose() * &j) + &(&j * m)).is_zero())
}

/// `SᵗJS = J`.
pub fn is_symplectic<S: Ring>(s: &Mat<S>) -> Result<bool> {
    let n = s.check_even_square()?;
    let j = standard_j::<S>(n);
    Ok(&(&s.transpose() * &j) * s == j)
}

/// Inverse of a symplectic matrix, `S⁻¹ = −J Sᵗ J`.
pub fn symplectic_inverse<S: Ring>(s: &Mat<S>) -> Mat<S> {
    let j = standard_j::<S>(s.rows() / 2);
    -&(&(&j * &s.transpose()) * &j)
}

/// Name of coordinate `k` in `(x_1..x_n, y_1..y_n)` order.
pub fn coord_name(n: usize, k: usize, x: &str, y: &str) -> String {
    if k < n {
        format!("{x}{}", k + 1)
    } else {
        format!("{y}{}", k - n + 1)
    }
}

/// Homogeneous quadratic Hamiltonian `½ xᵗAx + ½ yᵗBy + xᵗCy`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticHamiltonian<S> {
    n: usize,
    a: Mat<S>,
    b: Mat<S>,
    c: Mat<S>,
}

impl<S: Ring> QuadraticHamiltonian<S> {
    pub fn new(a: Mat<S>, b: Mat<S>, c: Mat<S>) -> Result<Self> {
        let n = a.rows();
        for m in [&a, &b, &c] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "blocks must all be {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if a != a.transpose() {
            return Err(Error::AsymmetricBlock('A'));
        }
        if b != b.transpose() {
            return Err(Error::AsymmetricBlock('B'));
        }
        Ok(Self { n, a, b, c })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, a: Mat::zeros(n, n), b: Mat::zeros(n, n), c: Mat::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Mat<S> {
        &self.a
    }

    pub fn b(&self) -> &Mat<S> {
        &self.b
    }

    pub fn c(&self) -> &Mat<S> {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// `S = ((A, C), (Cᵗ, B))`.
    pub fn hessian(&self) -> Mat<S> {
        Mat::from_blocks(&self.a, &self.c, &self.c.transpose(), &self.b)
    }

    pub fn from_hessian(s: &Mat<S>) -> Result<Self> {
        let n = s.check_even_square()?;
        let c = s.block(0, n, n, n);
        if s.block(n, 0, n, n) != c.transpose() {
            return Err(Error::DimensionMismatch("Hessian is not symmetric".into()));
        }
        Self::new(s.block(0, 0, n, n), s.block(n, n, n, n), c)
    }

    /// `c·z_i·z_j` for zero-based coordinate indices.
    pub fn monomial(n: usize, i: usize, j: usize, c: S) -> Self {
        let mut m = BTreeMap::new();
        m.insert((i.min(j), i.max(j)), c);
        Self::from_monomials(n, &m)
    }

    /// Coefficients of `z_i z_j` (`i ≤ j`), zero terms omitted.
    pub fn monomials(&self) -> BTreeMap<(usize, usize), S> {
        let s = self.hessian();
        let half = S::from_gaussian(&GaussianRational::from_ratio(1, 2));
        let mut out = BTreeMap::new();
        for i in 0..2 * self.n {
            for j in i..2 * self.n {
                let v = s.get(i, j);
                if v.is_zero() {
                    continue;
                }
                out.insert((i, j), if i == j { v.clone() * half.clone() } else { v.clone() });
            }
        }
        out
    }

    pub fn from_monomials(n: usize, terms: &BTreeMap<(usize, usize), S>) -> Self {
        let mut s = Mat::<S>::zeros(2 * n, 2 * n);
        for (&(i, j), c) in terms {
            let (i, j) = (i.min(j), i.max(j));
            if i == j {
                let v = s.get(i, i).clone() + c.clone() + c.clone();
                s.set(i, i, v);
            } else {
                let v = s.get(i, j).clone() + c.clone();
                s.set(i, j, v.clone());
                s.set(j, i, v);
            }
        }
        Self::from_hessian(&s).expect("symmetric by construction")
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { n: self.n, a: self.a.scale(c), b: self.b.scale(c), c: self.c.scale(c) }
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> QuadraticHamiltonian<T> {
        QuadraticHamiltonian { n: self.n, a: self.a.map(&f), b: self.b.map(&f), c: self.c.map(&f) }
    }

    /// `H∘T`, i.e. the form `z ↦ H(Tz)` with Hessian `TᵗST`.
    pub fn pullback(&self, t: &Mat<S>) -> Self {
        let s = self.hessian();
        Self::from_hessian(&(&(&t.transpose() * &s) * t)).expect("congruence keeps symmetry")
    }

    /// Gradient `S·z` at an exact point.
    pub fn gradient(&self, z: &[S]) -> Vec<S> {
        self.hessian().mul_vec(z)
    }

    /// Polynomial string with coordinate prefixes, e.g. `("x", "y")` or `("ξ", "η")`.
    pub fn to_poly_string(&self, x: &str, y: &str) -> String {
        let terms = self.monomials();
        if terms.is_empty() {
            return "0".into();
        }
        terms
            .iter()
            .map(|(&(i, j), c)| {
                let mono = if i == j {
                    format!("{}^2", coord_name(self.n, i, x, y))
                } else {
                    format!("{}*{}", coord_name(self.n, i, x, y), coord_name(self.n, j, x, y))
                };
                let cs = c.to_string();
                if cs == "1" {
                    mono
                } else {
                    format!("({cs})*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl QuadraticHamiltonian<GaussianRational> {
    /// `H(z)` in floating point.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.monomials()
            .iter()
            .map(|(&(i, j), c)| c.to_complex64() * z[i] * z[j])
            .sum()
    }

    pub fn to_ratfunc(&self) -> QuadraticHamiltonian<RatFunc> {
        self.map(|c| RatFunc::constant(c.clone()))
    }
}

impl<S: Ring> fmt::Display for QuadraticHamiltonian<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string("x", "y"))
    }
}

impl<S: Ring> Add for &QuadraticHamiltonian<S> {
    type Output = QuadraticHamiltonian<S>;
    fn add(self, rhs: Self) -> QuadraticHamiltonian<S> {
        assert_eq!(self.n, rhs.n);
        QuadraticHamiltonian { n: self.n, a: &self.a + &rhs.a, b: &self.b + &rhs.b, c: &self.c + &rhs.c }
    }
}

impl<S: Ring> Sub for &QuadraticHamiltonian<S> {
    type Output = QuadraticHamiltonian<S>;
    fn sub(self, rhs: Self) -> QuadraticHamiltonian<S> {
        assert_eq!(self.n, rhs.n);
        QuadraticHamiltonian { n: self.n, a: &self.a - &rhs.a, b: &self.b - &rhs.b, c: &self.c - &rhs.c }
    }
}

impl<S: Ring> Neg for &QuadraticHamiltonian<S> {
    type Output = QuadraticHamiltonian<S>;
    fn neg(self) -> QuadraticHamiltonian<S> {
        QuadraticHamiltonian { n: self.n, a: -&self.a, b: -&self.b, c: -&self.c }
    }
}

/// `M = ((Cᵗ, B), (−A, −C))`.
pub fn ham_to_matrix<S: Ring>(h: &QuadraticHamiltonian<S>) -> Mat<S> {
    Mat::from_blocks(&h.c.transpose(), &h.b, &-&h.a, &-&h.c)
}

/// Inverse of [`ham_to_matrix`].
pub fn matrix_to_ham<S: Ring>(m: &Mat<S>) -> Result<QuadraticHamiltonian<S>> {
    if !is_hamiltonian_matrix(m)? {
        return Err(Error::NotHamiltonian);
    }
    let n = m.rows() / 2;
    QuadraticHamiltonian::new(-&m.block(n, 0, n, n), m.block(0, n, n, n), -&m.block(n, n, n, n))
}

/// Right-hand side `M(t)` of `ż = M(t) z` for a time-dependent Hamiltonian.
pub fn motion_matrix(h: &QuadraticHamiltonian<RatFunc>) -> Mat<RatFunc> {
    ham_to_matrix(h)
}

/// Linear form `Σ c_k z_k`.
type Linear<S> = Vec<S>;

fn partial<S: Ring>(dim: usize, terms: &BTreeMap<(usize, usize), S>, k: usize) -> Linear<S> {
    let mut out = vec![S::zero(); dim];
    for (&(i, j), c) in terms {
        if i == k && j == k {
            out[k] = out[k].clone() + c.clone() + c.clone();
        } else if i == k {
            out[j] = out[j].clone() + c.clone();
        } else if j == k {
            out[i] = out[i].clone() + c.clone();
        }
    }
    out
}

fn accumulate_product<S: Ring>(acc: &mut BTreeMap<(usize, usize), S>, p: &Linear<S>, q: &Linear<S>, sign: bool) {
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let v = a.clone() * b.clone();
            let v = if sign { v } else { -v };
            let key = (i.min(j), i.max(j));
            let e = acc.entry(key).or_insert_with(S::zero);
            *e = e.clone() + v;
        }
    }
}

/// `{F, G} = Σ F_{x_i} G_{y_i} − F_{y_i} G_{x_i}` by differentiating the
/// monomial expansions.
pub fn bracket_by_partials<S: Ring>(
    f: &QuadraticHamiltonian<S>,
    g: &QuadraticHamiltonian<S>,
) -> QuadraticHamiltonian<S> {
    let n = f.n;
    let (ft, gt) = (f.monomials(), g.monomials());
    let mut acc = BTreeMap::new();
    for i in 0..n {
        let (fx, fy) = (partial(2 * n, &ft, i), partial(2 * n, &ft, n + i));
        let (gx, gy) = (partial(2 * n, &gt, i), partial(2 * n, &gt, n + i));
        accumulate_product(&mut acc, &fx, &gy, true);
        accumulate_product(&mut acc, &fy, &gx, false);
    }
    acc.retain(|_, v| !v.is_zero());
    QuadraticHamiltonian::from_monomials(n, &acc)
}

/// `{F, G}` through the dictionary: `matrix_to_ham([M_F, M_G])`.
pub fn bracket_by_commutator<S: Ring>(
    f: &QuadraticHamiltonian<S>,
    g: &QuadraticHamiltonian<S>,
) -> QuadraticHamiltonian<S> {
    let m = ham_to_matrix(f).commutator(&ham_to_matrix(g));
    matrix_to_ham(&m).expect("sp(2n) is closed under commutators")
}

/// Poisson bracket, computed both ways; disagreement is an internal error.
pub fn poisson_bracket<S: Ring>(
    f: &QuadraticHamiltonian<S>,
    g: &QuadraticHamiltonian<S>,
) -> Result<QuadraticHamiltonian<S>> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(format!("bracket of n={} and n={}", f.n, g.n)));
    }
    let p = bracket_by_partials(f, g);
    let c = bracket_by_commutator(f, g);
    if p != c {
        return Err(Error::InvariantViolation(format!("bracket routes disagree: {p} vs {c}")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfunc;

    type Q = GaussianRational;

    fn q(v: i64) -> Q {
        Q::from_integer(v)
    }

    fn mono(n: usize, i: usize, j: usize, c: i64) -> QuadraticHamiltonian<Q> {
        QuadraticHamiltonian::monomial(n, i, j, q(c))
    }

    #[test]
    fn j_matrix() {
        assert_eq!(standard_j::<Q>(1), Mat::from_i64(&[&[0, 1], &[-1, 0]]));
        let j = standard_j::<Q>(2);
        assert_eq!(&j * &j, -&Mat::identity(4));
        assert_eq!(j.transpose(), -&j);
    }

    #[test]
    fn membership() {
        assert!(is_hamiltonian_matrix(&Mat::<Q>::zeros(4, 4)).unwrap());
        assert!(is_hamiltonian_matrix(&Mat::<Q>::diag(vec![q(1), q(2), q(-1), q(-2)])).unwrap());
        assert!(!is_hamiltonian_matrix(&Mat::<Q>::identity(4)).unwrap());
        assert!(matches!(is_hamiltonian_matrix(&Mat::<Q>::zeros(3, 3)), Err(Error::OddDimension(3))));
        assert!(matches!(is_hamiltonian_matrix(&Mat::<Q>::zeros(2, 4)), Err(Error::NonSquare { .. })));

        let t = parse_ratfunc("t").unwrap();
        let s = Mat::diag(vec![t.clone(), RatFunc::one(), t.inv().unwrap(), RatFunc::one()]);
        assert!(is_symplectic(&s).unwrap());
        assert!(!is_symplectic(&Mat::<Q>::diag(vec![q(2), q(1), q(1), q(1)])).unwrap());
    }

    #[test]
    fn dictionary_examples() {
        let x1y1 = mono(2, 0, 2, 1);
        assert_eq!(ham_to_matrix(&x1y1), Mat::diag(vec![q(1), q(0), q(-1), q(0)]));
        let half_x1sq = QuadraticHamiltonian::monomial(1, 0, 0, Q::from_ratio(1, 2));
        assert_eq!(ham_to_matrix(&half_x1sq), Mat::from_i64(&[&[0, 0], &[-1, 0]]));
        let m: Mat<Q> = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(matrix_to_ham(&m).unwrap(), QuadraticHamiltonian::monomial(1, 1, 1, Q::from_ratio(1, 2)));
        assert!(matches!(matrix_to_ham(&Mat::<Q>::identity(2)), Err(Error::NotHamiltonian)));
    }

    #[test]
    fn bracket_examples() {
        let b = poisson_bracket(&mono(1, 0, 0, 1), &mono(1, 1, 1, 1)).unwrap();
        assert_eq!(b, mono(1, 0, 1, 4));
        assert_eq!(ham_to_matrix(&b), Mat::diag(vec![q(4), q(-4)]));
        // row 7 invariant against η₁²: ξ₂η₁ is (1,2), η₂² is (3,3)
        let f = &mono(2, 1, 2, 2) + &mono(2, 3, 3, 1);
        assert!(poisson_bracket(&f, &mono(2, 2, 2, 1)).unwrap().is_zero());
        assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn motion_matrix_with_time() {
        let f = parse_ratfunc("1/t").unwrap();
        let h = QuadraticHamiltonian::monomial(2, 0, 2, f.clone());
        assert_eq!(motion_matrix(&h), Mat::diag(vec![f.clone(), RatFunc::zero(), -f, RatFunc::zero()]));
        let h = QuadraticHamiltonian::monomial(1, 0, 0, parse_ratfunc("t/2").unwrap());
        let t = parse_ratfunc("t").unwrap();
        assert_eq!(motion_matrix(&h), Mat::from_rows(vec![vec![RatFunc::zero(); 2], vec![-t, RatFunc::zero()]]));
    }

    #[test]
    fn asymmetric_block_rejected() {
        let a: Mat<Q> = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        let z = Mat::zeros(2, 2);
        assert!(matches!(QuadraticHamiltonian::new(a, z.clone(), z), Err(Error::AsymmetricBlock('A'))));
    }
}
