//! Characteristic polynomials, exact Jordan–Chevalley decomposition and
//! symplectic eigenbases over `Q(i)`.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{GaussianRational, Poly};
use crate::symplectic::is_hamiltonian_matrix;

type Q = GaussianRational;

/// `det(xI − A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &Mat<Q>) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = Mat::<Q>::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &Mat::identity(n).scale(&c[n - k + 1]);
        let tr = (a * &m).trace();
        c[n - k] = -&(&tr * &Q::from_ratio(1, k as i64));
    }
    Poly::new(c)
}

/// `p(A)` by Horner's rule.
pub(crate) fn eval_matrix_poly(p: &Poly, a: &Mat<Q>) -> Mat<Q> {
    let n = a.rows();
    let mut acc = Mat::<Q>::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * a) + &Mat::identity(n).scale(c);
    }
    acc
}

/// `A = S + N` with `S` semisimple, `N` nilpotent, `[S, N] = 0`, both
/// polynomials in `A`. Newton iteration on the square-free part of the
/// characteristic polynomial.
pub fn jordan_decomposition(a: &Mat<Q>) -> Result<(Mat<Q>, Mat<Q>)> {
    let p = charpoly(a);
    let g = p.gcd(&p.derivative());
    let ps = p.div_exact(&g).monic();
    let dps = ps.derivative();
    let mut s = a.clone();
    for _ in 0..16 {
        let v = eval_matrix_poly(&ps, &s);
        if v.is_zero() {
            let nil = a - &s;
            if !nil.pow(a.rows() as u32).is_zero() || !s.commutator(&nil).is_zero() {
                return Err(Error::InvariantViolation("Jordan decomposition check failed".into()));
            }
            return Ok((s, nil));
        }
        let d = eval_matrix_poly(&dps, &s)
            .inverse()
            .ok_or_else(|| Error::InvariantViolation("singular Newton step in Jordan decomposition".into()))?;
        s = &s - &(&v * &d);
    }
    Err(Error::InvariantViolation("Jordan decomposition did not converge".into()))
}

/// `ω(u, v) = uᵗJv`.
pub fn omega(u: &[Q], v: &[Q]) -> Q {
    let n = u.len() / 2;
    let mut acc = Q::zero();
    for i in 0..n {
        acc += &(&u[i] * &v[n + i]);
        acc -= &(&u[n + i] * &v[i]);
    }
    acc
}

pub(crate) fn vscale(v: &[Q], c: &Q) -> Vec<Q> {
    v.iter().map(|x| x * c).collect()
}

pub(crate) fn vadd(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub(crate) fn vsub(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub(crate) fn unit_vec(n: usize, k: usize) -> Vec<Q> {
    (0..n).map(|i| if i == k { Q::one() } else { Q::zero() }).collect()
}

/// Representative of `{μ, −μ}` that is lexicographically positive.
pub(crate) fn positive_rep(mu: Q) -> Q {
    if mu.lex_cmp(&Q::zero()).is_lt() {
        -mu
    } else {
        mu
    }
}

/// For `A ∈ sp(4)` with spectrum `{±μ₁, ±μ₂}`, returns `(μ₁, μ₂)` with each
/// representative lexicographically nonnegative and `μ₁ ≥ μ₂` in that order.
pub fn sp4_eigenvalue_pairs(a: &Mat<Q>) -> Result<(Q, Q)> {
    if a.rows() != 4 || !is_hamiltonian_matrix(a)? {
        return Err(Error::NotHamiltonian);
    }
    let p = charpoly(a);
    debug_assert!(p.coeff(1).is_zero() && p.coeff(3).is_zero());
    let (c2, c0) = (p.coeff(2), p.coeff(0));
    let disc = &(&c2 * &c2) - &(&Q::from_integer(4) * &c0);
    let sq = disc
        .sqrt()
        .ok_or_else(|| Error::IrrationalEigenvalueRatio(format!("characteristic polynomial {p}")))?;
    let half = Q::from_ratio(1, 2);
    let s1 = &(&(-&c2) + &sq) * &half;
    let s2 = &(&(-&c2) - &sq) * &half;
    let m1 = s1.sqrt().ok_or_else(|| Error::IrrationalEigenvalueRatio(format!("eigenvalue square {s1}")))?;
    let m2 = s2.sqrt().ok_or_else(|| Error::IrrationalEigenvalueRatio(format!("eigenvalue square {s2}")))?;
    let (m1, m2) = (positive_rep(m1), positive_rep(m2));
    Ok(if m1.lex_cmp(&m2).is_ge() { (m1, m2) } else { (m2, m1) })
}

/// Scales `f` so that `ω(e, f) = 1`; `None` if `ω(e, f) = 0`.
pub(crate) fn normalize_pair(e: &[Q], f: &[Q]) -> Option<Vec<Q>> {
    let w = omega(e, f);
    w.inv().map(|wi| vscale(f, &wi))
}

/// Symplectic basis `(e, f)` of a two-dimensional symplectic subspace.
pub(crate) fn symplectic_plane(vs: &[Vec<Q>]) -> Option<(Vec<Q>, Vec<Q>)> {
    for (i, e) in vs.iter().enumerate() {
        for f in &vs[i + 1..] {
            if let Some(f) = normalize_pair(e, f) {
                return Some((e.clone(), f));
            }
        }
    }
    None
}

/// Matrix with columns `t1..t4` (`t1, t2` positions, `t3, t4` momenta).
pub(crate) fn frame_from_columns(cols: [Vec<Q>; 4]) -> Mat<Q> {
    Mat::from_columns(&cols)
}

/// Symplectic `T` with `T⁻¹ S T = diag(μ_a, μ_b, −μ_a, −μ_b)` for a
/// semisimple `S ∈ sp(4)` with eigenvalues in `Q(i)`.
pub(crate) fn symplectic_eigenbasis(s: &Mat<Q>) -> Result<(Mat<Q>, [Q; 2])> {
    let (m1, m2) = sp4_eigenvalue_pairs(s)?;
    let id = Mat::<Q>::identity(4);
    let mut xs: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut ys: Vec<Vec<Q>> = Vec::new();
    let mut reps = vec![m1.clone()];
    if m2 != m1 {
        reps.push(m2.clone());
    }
    for mu in reps {
        if mu.is_zero() {
            let ker = s.nullspace();
            let (e, f) = symplectic_plane(&ker)
                .ok_or_else(|| Error::InvariantViolation("zero eigenspace is not symplectic".into()))?;
            let dim = ker.len();
            if dim != 2 && !(dim == 4 && s.is_zero()) {
                return Err(Error::InvariantViolation("matrix is not semisimple".into()));
            }
            xs.push((e, Q::zero()));
            ys.push(f);
            if dim == 4 {
                let (e2, f2) = complement_plane(&xs[0].0, &ys[0], &ker)?;
                xs.push((e2, Q::zero()));
                ys.push(f2);
            }
            continue;
        }
        let u = (s - &id.scale(&mu)).nullspace();
        let w = (s + &id.scale(&mu)).nullspace();
        if u.len() != w.len() || u.is_empty() {
            return Err(Error::InvariantViolation("eigenspaces of ±μ do not pair".into()));
        }
        let k = u.len();
        let gram = Mat::from_fn(k, k, |i, j| omega(&u[i], &w[j]));
        let g_inv = gram
            .inverse()
            .ok_or_else(|| Error::InvariantViolation("matrix is not semisimple".into()))?;
        for (i, ui) in u.iter().enumerate() {
            let mut v = vec![Q::zero(); 4];
            for (l, wl) in w.iter().enumerate() {
                v = vadd(&v, &vscale(wl, g_inv.get(l, i)));
            }
            xs.push((ui.clone(), mu.clone()));
            ys.push(v);
        }
    }
    if xs.len() != 2 {
        return Err(Error::InvariantViolation("matrix is not semisimple".into()));
    }
    let t = frame_from_columns([xs[0].0.clone(), xs[1].0.clone(), ys[0].clone(), ys[1].clone()]);
    Ok((t, [xs[0].1.clone(), xs[1].1.clone()]))
}

/// Second symplectic pair in the ω-complement of `(e, f)` inside `space`.
pub(crate) fn complement_plane(e: &[Q], f: &[Q], space: &[Vec<Q>]) -> Result<(Vec<Q>, Vec<Q>)> {
    let proj: Vec<Vec<Q>> = space
        .iter()
        .map(|v| {
            // v − ω(v, f)e + ω(v, e)f is ω-orthogonal to e and f
            let a = omega(v, f);
            let b = omega(v, e);
            vadd(&vsub(v, &vscale(e, &a)), &vscale(f, &b))
        })
        .collect();
    symplectic_plane(&proj).ok_or_else(|| Error::InvariantViolation("no complementary symplectic plane".into()))
}

/// Completes an isotropic pair `(l1, l2)` with `ω`-dual vectors, giving a
/// symplectic frame `[l1, l2, l1', l2']`.
pub(crate) fn complete_lagrangian(l1: &[Q], l2: &[Q]) -> Result<Mat<Q>> {
    let ls = [l1.to_vec(), l2.to_vec()];
    let mut sub = crate::linalg::Subspace::new(4);
    sub.insert(l1);
    sub.insert(l2);
    let mut cs = Vec::new();
    for k in 0..4 {
        let e = unit_vec(4, k);
        if sub.insert(&e) {
            cs.push(e);
        }
    }
    let gram = Mat::from_fn(2, 2, |i, j| omega(&ls[i], &cs[j]));
    let g_inv = gram
        .inverse()
        .ok_or_else(|| Error::InvariantViolation("isotropic pair is not Lagrangian".into()))?;
    // d_j = Σ_l c_l (G⁻¹)_{lj} satisfies ω(l_i, d_j) = δ_ij
    let mut ds: Vec<Vec<Q>> = (0..2)
        .map(|j| vadd(&vscale(&cs[0], g_inv.get(0, j)), &vscale(&cs[1], g_inv.get(1, j))))
        .collect();
    // make span{d} isotropic: d_2 ← d_2 + ω(d_1, d_2)·l_1
    let w = omega(&ds[0], &ds[1]);
    ds[1] = vadd(&ds[1], &vscale(&ls[0], &w));
    Ok(frame_from_columns([ls[0].clone(), ls[1].clone(), ds[0].clone(), ds[1].clone()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::is_symplectic;

    fn q(v: i64) -> Q {
        Q::from_integer(v)
    }

    #[test]
    fn charpoly_of_diagonal() {
        let a = Mat::diag(vec![q(1), q(2), q(-1), q(-2)]);
        // (x²−1)(x²−4) = x⁴ − 5x² + 4
        assert_eq!(charpoly(&a), Poly::new(vec![q(4), q(0), q(-5), q(0), q(1)]));
    }

    #[test]
    fn jordan_parts_commute() {
        // diag(1, 0, −1, 0) + E24 written in a mixed basis
        let a: Mat<Q> = Mat::from_i64(&[&[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0], &[0, 0, 0, 0]]);
        let (s, n) = jordan_decomposition(&a).unwrap();
        assert_eq!(s, Mat::diag(vec![q(1), q(0), q(-1), q(0)]));
        assert_eq!(n, Mat::unit(4, 1, 3));
    }

    #[test]
    fn eigenbasis_is_symplectic() {
        for d in [[1, 2], [3, 0], [2, 2], [2, -2], [0, 5]] {
            let s = Mat::diag(vec![q(d[0]), q(d[1]), q(-d[0]), q(-d[1])]);
            let (t, mus) = symplectic_eigenbasis(&s).unwrap();
            assert!(is_symplectic(&t).unwrap(), "{d:?}");
            let conj = &(&t.inverse().unwrap() * &s) * &t;
            assert_eq!(conj, Mat::diag(vec![mus[0].clone(), mus[1].clone(), -&mus[0], -&mus[1]]));
        }
    }

    #[test]
    fn irrational_spectrum_is_reported() {
        // x₁²/2 − y₁²·... with eigenvalues ±√2
        let a: Mat<Q> = Mat::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 0], &[-2, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(matches!(sp4_eigenvalue_pairs(&a), Err(Error::IrrationalEigenvalueRatio(_))));
    }

    #[test]
    fn lagrangian_completion() {
        let l1 = vec![q(1), q(1), q(0), q(0)];
        let l2 = vec![q(0), q(1), q(0), q(0)];
        assert!(is_symplectic(&complete_lagrangian(&l1, &l2).unwrap()).unwrap());
    }
}
