//! Constant Lie algebras of Hamiltonian matrices: coefficient algebras,
//! closure, centralizers, nilpotent and abelian classification in `sp(4)`,
//! and first integrals of abelian algebras.

mod abelian;
mod integrals;
mod jordan;
mod nilpotent;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalars::{GaussianRational, Poly, RatFunc, Ring};
use crate::symplectic::{ham_to_matrix, is_hamiltonian_matrix, QuadraticHamiltonian};

pub use abelian::{canonical_algebra, classify_abelian, AbelianClass, AbelianClassId};
pub use integrals::{first_integrals_from_abelian, functionally_independent, normalize_form};
pub use jordan::{charpoly, jordan_decomposition, omega, sp4_eigenvalue_pairs};
pub use nilpotent::{
    classify_nilpotent, classify_nilpotent_span, nilpotent_normal_form, NilpotentCase, NilpotentClass,
};

type Q = GaussianRational;

pub(crate) fn flatten(m: &Mat<Q>) -> Vec<Q> {
    m.entries().to_vec()
}

pub(crate) fn unflatten(size: usize, v: &[Q]) -> Mat<Q> {
    Mat::from_fn(size, size, |i, j| v[i * size + j].clone())
}

/// Linearly independent Hamiltonian matrices in reduced echelon form.
#[derive(Clone, Debug)]
pub struct LieBasis {
    n: usize,
    space: Subspace<Q>,
    closed: bool,
}

impl LieBasis {
    /// Span of `gens`; every generator must be Hamiltonian.
    pub fn span(n: usize, gens: &[Mat<Q>]) -> Result<Self> {
        let mut space = Subspace::new(4 * n * n);
        for g in gens {
            if g.rows() != 2 * n {
                return Err(Error::DimensionMismatch(format!("generator of size {} for n = {n}", g.rows())));
            }
            if !is_hamiltonian_matrix(g)? {
                return Err(Error::NotHamiltonian);
            }
            space.insert(&flatten(g));
        }
        let mut b = Self { n, space, closed: false };
        b.closed = b.bracket_closed();
        Ok(b)
    }

    pub fn empty(n: usize) -> Self {
        Self { n, space: Subspace::new(4 * n * n), closed: true }
    }

    fn bracket_closed(&self) -> bool {
        let els = self.elements();
        for (i, a) in els.iter().enumerate() {
            for b in &els[i + 1..] {
                if !self.space.contains(&flatten(&a.commutator(b))) {
                    return false;
                }
            }
        }
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn elements(&self) -> Vec<Mat<Q>> {
        self.space.basis().iter().map(|v| unflatten(2 * self.n, v)).collect()
    }

    pub fn contains(&self, m: &Mat<Q>) -> bool {
        self.space.contains(&flatten(m))
    }

    pub fn contains_all(&self, other: &LieBasis) -> bool {
        self.space.contains_all(&other.space)
    }

    pub fn same_span(&self, other: &LieBasis) -> bool {
        self.space.equals(&other.space)
    }

    /// `T⁻¹·X·T` applied to every element.
    pub fn conjugate(&self, t: &Mat<Q>, t_inv: &Mat<Q>) -> LieBasis {
        let els: Vec<Mat<Q>> = self.elements().iter().map(|x| &(t_inv * x) * t).collect();
        LieBasis::span(self.n, &els).expect("conjugation by a symplectic matrix preserves sp")
    }
}

/// Smallest bracket-closed subspace containing `gens`.
pub fn lie_closure(n: usize, gens: &[Mat<Q>]) -> Result<LieBasis> {
    let mut b = LieBasis::span(n, gens)?;
    let mut all = b.elements();
    let mut frontier = 0;
    while frontier < all.len() {
        let x = all[frontier].clone();
        for k in 0..frontier {
            let c = x.commutator(&all[k]);
            if b.space.insert(&flatten(&c)) {
                all.push(c);
            }
        }
        frontier += 1;
    }
    b.closed = true;
    debug_assert!(b.bracket_closed());
    Ok(b)
}

/// First pair of basis elements that do not commute.
pub fn non_commuting_pair(b: &LieBasis) -> Option<(Mat<Q>, Mat<Q>)> {
    let els = b.elements();
    for (i, x) in els.iter().enumerate() {
        for y in &els[i + 1..] {
            if !x.commutator(y).is_zero() {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

pub fn is_abelian(b: &LieBasis) -> bool {
    non_commuting_pair(b).is_none()
}

/// `M(t) = Σ_j f_j(t)·M_j` with constant, linearly independent `M_j`.
#[derive(Clone, Debug)]
pub struct CoefficientDecomposition {
    pub matrices: Vec<Mat<Q>>,
    pub functions: Vec<RatFunc>,
}

/// Splits `M(t)` over a common denominator `D(t)` as `D⁻¹·Σ_k t^k N_k`, then
/// re-expresses it over an echelon basis of `span{N_k}`.
pub fn coefficient_decomposition(m: &Mat<RatFunc>) -> CoefficientDecomposition {
    let size = m.rows();
    let mut den = Poly::one();
    for e in m.entries() {
        if !e.is_zero() && !e.den().is_one() {
            let g = den.gcd(e.den());
            den = (&den * e.den()).div_exact(&g);
        }
    }
    let den_rf = RatFunc::from_poly(den.clone());
    let nums: Vec<Poly> = m
        .entries()
        .iter()
        .map(|e| {
            let scaled = e * &den_rf;
            debug_assert!(scaled.is_polynomial());
            scaled.num().clone()
        })
        .collect();
    let max_deg = nums.iter().filter_map(Poly::degree).max();
    let Some(max_deg) = max_deg else {
        return CoefficientDecomposition { matrices: Vec::new(), functions: Vec::new() };
    };
    let layers: Vec<Vec<Q>> = (0..=max_deg).map(|k| nums.iter().map(|p| p.coeff(k)).collect()).collect();
    let space = Subspace::spanned_by(size * size, layers.iter());
    let basis: Vec<Vec<Q>> = space.basis().to_vec();
    // coordinates of each layer in the basis, then f_j = D⁻¹ Σ_k c_{kj} t^k
    let den_inv = den_rf.inv().expect("nonzero denominator");
    let mut functions = vec![Poly::zero(); basis.len()];
    for (k, layer) in layers.iter().enumerate() {
        let coords = Mat::solve_combination(&basis, layer).expect("layer lies in its own span");
        for (j, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                functions[j] = &functions[j] + &Poly::monomial(c, k);
            }
        }
    }
    CoefficientDecomposition {
        matrices: basis.iter().map(|v| unflatten(size, v)).collect(),
        functions: functions.into_iter().map(|p| &RatFunc::from_poly(p) * &den_inv).collect(),
    }
}

/// Lie closure of the constant matrices spanning the values of `M(t)`.
pub fn coefficient_algebra(m: &Mat<RatFunc>) -> Result<LieBasis> {
    let n = m.check_even_square()?;
    let d = coefficient_decomposition(m);
    lie_closure(n, &d.matrices)
}

/// `ham_to_matrix` of the monomials `z_i z_j`, a basis of `sp(2n)`.
pub fn sp_basis(n: usize) -> Vec<Mat<Q>> {
    let mut out = Vec::new();
    for i in 0..2 * n {
        for j in i..2 * n {
            out.push(ham_to_matrix(&QuadraticHamiltonian::monomial(n, i, j, Q::one())));
        }
    }
    out
}

/// Elements of `sp(2n)` commuting with every matrix in `mats`.
pub fn common_centralizer(n: usize, mats: &[Mat<Q>]) -> LieBasis {
    let basis = sp_basis(n);
    if mats.is_empty() {
        return LieBasis::span(n, &basis).expect("sp basis");
    }
    let rows = 4 * n * n * mats.len();
    let mut sys = Mat::zeros(rows, basis.len());
    for (k, x) in basis.iter().enumerate() {
        for (a_idx, a) in mats.iter().enumerate() {
            let c = a.commutator(x);
            for (r, v) in c.entries().iter().enumerate() {
                sys.set(a_idx * 4 * n * n + r, k, v.clone());
            }
        }
    }
    let gens: Vec<Mat<Q>> = sys
        .nullspace()
        .iter()
        .map(|coef| {
            coef.iter()
                .zip(&basis)
                .filter(|(c, _)| !c.is_zero())
                .fold(Mat::zeros(2 * n, 2 * n), |acc, (c, x)| &acc + &x.scale(c))
        })
        .collect();
    LieBasis::span(n, &gens).expect("centralizer elements lie in sp")
}

/// Solutions `X ∈ sp(2n)` of `[A, X] = 0`.
pub fn centralizer(a: &Mat<Q>) -> Result<LieBasis> {
    let n = a.check_even_square()?;
    if !is_hamiltonian_matrix(a)? {
        return Err(Error::NotHamiltonian);
    }
    Ok(common_centralizer(n, std::slice::from_ref(a)))
}

/// `Σ_k s^k A^k / k!`, finite because `A` is nilpotent.
pub fn exp_nilpotent<S: Ring>(a: &Mat<S>, s: &S) -> Result<Mat<S>> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let size = a.rows();
    if !a.pow(size as u32).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut acc = Mat::identity(size);
    let mut term = Mat::identity(size);
    let mut fact = 1i64;
    for k in 1..size {
        term = (&term * a).scale(s);
        if term.is_zero() {
            break;
        }
        fact *= k as i64;
        let inv = S::from_gaussian(&Q::from_ratio(1, fact));
        acc = &acc + &term.scale(&inv);
    }
    Ok(acc)
}
