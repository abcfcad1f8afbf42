//! Commuting quadratic first integrals read off an abelian algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalars::GaussianRational;
use crate::symplectic::{matrix_to_ham, QuadraticHamiltonian};

use super::{common_centralizer, flatten, is_abelian, LieBasis};

type Q = GaussianRational;

/// Scales `h` so that its first monomial (in index order) has coefficient 1.
pub fn normalize_form(h: &QuadraticHamiltonian<Q>) -> QuadraticHamiltonian<Q> {
    match h.monomials().values().next().and_then(Q::inv) {
        Some(c) => h.scale(&c),
        None => h.clone(),
    }
}

/// Commuting quadratic forms whose Hamiltonian matrices form the echelon basis
/// of an abelian algebra containing `b`. A one-dimensional `b` is first
/// extended by an element of its centralizer; the empty algebra gives
/// `{x₁y₁, …, x_ny_n}`.
pub fn first_integrals_from_abelian(b: &LieBasis) -> Result<Vec<QuadraticHamiltonian<Q>>> {
    if !is_abelian(b) {
        return Err(Error::NotAbelian);
    }
    let n = b.n();
    let mut mats = b.elements();
    if mats.is_empty() {
        return Ok((0..n).map(|i| QuadraticHamiltonian::monomial(n, i, n + i, Q::one())).collect());
    }
    if mats.len() < n {
        let cent = common_centralizer(n, &mats);
        let mut seen = Subspace::spanned_by(4 * n * n, mats.iter().map(flatten).collect::<Vec<_>>().iter());
        for x in cent.elements() {
            if mats.len() == n {
                break;
            }
            if mats.iter().all(|m| m.commutator(&x).is_zero()) && seen.insert(&flatten(&x)) {
                mats.push(x);
            }
        }
    }
    let envelope = LieBasis::span(n, &mats)?;
    envelope.elements().iter().map(|m| matrix_to_ham(m).map(|h| normalize_form(&h))).collect()
}

fn random_point(rng: &mut ChaCha8Rng, size: usize) -> Vec<Q> {
    (0..size).map(|_| Q::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect()
}

/// Rank of the gradients at a seeded random rational point, retried up to five
/// times. For homogeneous quadratics functional and linear independence agree,
/// which settles the rare case where every sample is degenerate.
pub fn functionally_independent(forms: &[QuadraticHamiltonian<Q>], seed: u64) -> bool {
    if forms.is_empty() {
        return true;
    }
    let size = 2 * forms[0].n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let z = random_point(&mut rng, size);
        let grads: Vec<Vec<Q>> = forms.iter().map(|f| f.gradient(&z)).collect();
        if Mat::from_rows(grads).rank() == forms.len() {
            return true;
        }
    }
    let hs: Vec<Vec<Q>> = forms.iter().map(|f| flatten(&f.hessian())).collect();
    Subspace::spanned_by(size * size, hs.iter()).dim() == forms.len()
}
