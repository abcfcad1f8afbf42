//! Seeded generators of exact test data.
//!
//! Everything here is built from small integers so that exact computations on
//! the outputs stay cheap.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::Mat;
use crate::scalars::{GaussianRational, Poly, RatFunc, Ring};
use crate::symplectic::QuadraticHamiltonian;

/// Small Gaussian rational; real with probability one half.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let re = GaussianRational::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    if rng.gen_bool(0.5) {
        re
    } else {
        &re + &(&GaussianRational::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)) * &GaussianRational::i())
    }
}

pub fn nonzero_gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let g = gaussian(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Small nonzero integer in `[-k, k]`.
pub fn nonzero_int<R: Rng + ?Sized>(rng: &mut R, k: i64) -> i64 {
    loop {
        let v = rng.gen_range(-k..=k);
        if v != 0 {
            return v;
        }
    }
}

pub fn poly<R: Rng + ?Sized>(rng: &mut R, max_degree: usize) -> Poly {
    let d = rng.gen_range(0..=max_degree);
    Poly::new((0..=d).map(|_| gaussian(rng)).collect())
}

/// Random rational function; about a third are constants and a third are
/// polynomials.
pub fn ratfunc<R: Rng + ?Sized>(rng: &mut R) -> RatFunc {
    match rng.gen_range(0..3) {
        0 => RatFunc::constant(gaussian(rng)),
        1 => RatFunc::from_poly(poly(rng, 2)),
        _ => {
            let den = loop {
                let d = poly(rng, 2);
                if !d.is_zero() {
                    break d;
                }
            };
            RatFunc::new(poly(rng, 2), den).expect("nonzero denominator")
        }
    }
}

fn symmetric<S: Ring, R: Rng + ?Sized>(rng: &mut R, n: usize, sparsity: f64, mut f: impl FnMut(&mut R) -> S) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(sparsity) {
                let v = f(rng);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
    }
    m
}

fn square<S: Ring, R: Rng + ?Sized>(rng: &mut R, n: usize, sparsity: f64, mut f: impl FnMut(&mut R) -> S) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(sparsity) {
                m.set(i, j, f(rng));
            }
        }
    }
    m
}

/// Random quadratic Hamiltonian with the given coefficient generator.
pub fn quadratic_with<S: Ring, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sparsity: f64,
    mut f: impl FnMut(&mut R) -> S,
) -> QuadraticHamiltonian<S> {
    let a = symmetric(rng, n, sparsity, &mut f);
    let b = symmetric(rng, n, sparsity, &mut f);
    let c = square(rng, n, sparsity, &mut f);
    QuadraticHamiltonian::new(a, b, c).expect("symmetric blocks")
}

pub fn constant_quadratic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuadraticHamiltonian<GaussianRational> {
    quadratic_with(rng, n, 0.6, gaussian)
}

pub fn ratfunc_quadratic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuadraticHamiltonian<RatFunc> {
    quadratic_with(rng, n, 0.5, ratfunc)
}

/// One elementary symplectic factor whose free entries come from `coef`.
///
/// `unit` must produce invertible values (used for symplectic scalings).
fn elementary<S: Ring, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    coef: &mut impl FnMut(&mut R) -> S,
    unit: &mut impl FnMut(&mut R) -> (S, S),
) -> Mat<S> {
    let id = Mat::<S>::identity(n);
    let zero = Mat::<S>::zeros(n, n);
    match rng.gen_range(0..6) {
        0 | 1 => {
            let mut s = Mat::zeros(n, n);
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let v = coef(rng);
            s.set(i, j, v.clone());
            s.set(j, i, v);
            if rng.gen_bool(0.5) {
                Mat::from_blocks(&id, &s, &zero, &id)
            } else {
                Mat::from_blocks(&id, &zero, &s, &id)
            }
        }
        2 => {
            let i = rng.gen_range(0..n);
            let (u, u_inv) = unit(rng);
            let mut m = Mat::identity(2 * n);
            m.set(i, i, u);
            m.set(n + i, n + i, u_inv);
            m
        }
        3 if n > 1 => {
            // diag(U, U⁻ᵀ) with U = I + c·E_ij, U⁻ᵀ = I − c·E_ji
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = coef(rng);
            let mut m = Mat::identity(2 * n);
            m.set(i, j, c.clone());
            m.set(n + j, n + i, -c);
            m
        }
        4 => {
            // (x_i, y_i) ↦ (y_i, −x_i)
            let i = rng.gen_range(0..n);
            let mut m = Mat::identity(2 * n);
            m.set(i, i, S::zero());
            m.set(n + i, n + i, S::zero());
            m.set(i, n + i, S::one());
            m.set(n + i, i, -S::one());
            m
        }
        _ => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            Mat::from_fn(2 * n, 2 * n, |r, c| {
                let (rb, ri) = (r / n, r % n);
                let (cb, ci) = (c / n, c % n);
                if rb == cb && perm[ri] == ci {
                    S::one()
                } else {
                    S::zero()
                }
            })
        }
    }
}

/// Product of `factors` elementary symplectic matrices with constant entries.
pub fn constant_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize, factors: usize) -> Mat<GaussianRational> {
    let mut coef = |r: &mut R| GaussianRational::from_ratio(nonzero_int(r, 3), r.gen_range(1..=2));
    let mut unit = |r: &mut R| {
        let u = GaussianRational::from_integer(nonzero_int(r, 2));
        let inv = u.inv().expect("nonzero");
        (u, inv)
    };
    let mut m = Mat::identity(2 * n);
    for _ in 0..factors {
        m = &m * &elementary(rng, n, &mut coef, &mut unit);
    }
    m
}

/// Product of `factors` elementary symplectic matrices with entries in
/// `Q(i)[t]` and scalings by `u ∈ {c, t + k}`, `k ≥ 0`; poles lie at `t ≤ 0`.
pub fn ratfunc_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize, factors: usize) -> Mat<RatFunc> {
    let mut coef = |r: &mut R| {
        let c = GaussianRational::from_integer(nonzero_int(r, 2));
        if r.gen_bool(0.5) {
            RatFunc::constant(c)
        } else {
            RatFunc::from_poly(Poly::new(vec![GaussianRational::from_integer(r.gen_range(-2..=2)), c]))
        }
    };
    let mut unit = |r: &mut R| {
        let u = if r.gen_bool(0.5) {
            RatFunc::from_integer(nonzero_int(r, 2))
        } else {
            RatFunc::from_poly(Poly::new(vec![GaussianRational::from_integer(r.gen_range(0..=2)), GaussianRational::one()]))
        };
        let inv = u.inv().expect("nonzero");
        (u, inv)
    };
    let mut m = Mat::identity(2 * n);
    for _ in 0..factors {
        m = &m * &elementary(rng, n, &mut coef, &mut unit);
    }
    m
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::symplectic::is_symplectic;

    #[test]
    fn generated_frames_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            for _ in 0..10 {
                assert!(is_symplectic(&constant_symplectic(&mut rng, n, 6)).unwrap());
                assert!(is_symplectic(&ratfunc_symplectic(&mut rng, n, 4)).unwrap());
            }
        }
    }
}
