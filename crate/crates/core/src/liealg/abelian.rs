//! Connected abelian subalgebras of `sp(4)` up to symplectic conjugation.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalars::GaussianRational;
use crate::symplectic::is_symplectic;

use super::jordan::{
    complete_lagrangian, frame_from_columns, jordan_decomposition, omega, symplectic_eigenbasis, vscale,
};
use super::nilpotent::{classify_nilpotent_span, nilpotent_normal_form, NilpotentCase};
use super::{flatten, is_abelian, LieBasis};

type Q = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbelianClassId {
    C1a,
    C1b,
    C1c,
    C2a,
    C2b,
    C2c,
    C3,
    C4,
    C5a,
    C5b,
}

impl AbelianClassId {
    pub const ALL: [AbelianClassId; 10] = [
        Self::C1a,
        Self::C1b,
        Self::C1c,
        Self::C2a,
        Self::C2b,
        Self::C2c,
        Self::C3,
        Self::C4,
        Self::C5a,
        Self::C5b,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::C1a => "1a",
            Self::C1b => "1b",
            Self::C1c => "1c",
            Self::C2a => "2a",
            Self::C2b => "2b",
            Self::C2c => "2c",
            Self::C3 => "3",
            Self::C4 => "4",
            Self::C5a => "5a",
            Self::C5b => "5b",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }

    /// Dimension of the canonical algebra.
    pub fn dim(self) -> usize {
        match self {
            Self::C3 | Self::C4 | Self::C5a | Self::C5b => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for AbelianClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `conjugator⁻¹ · b · conjugator` lies in (and for the hull, spans)
/// [`canonical_algebra`] of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianClass {
    pub class: AbelianClassId,
    pub pq: Option<(i64, i64)>,
    pub k: Option<Q>,
    pub conjugator: Mat<Q>,
}

impl AbelianClass {
    pub fn algebra(&self) -> Vec<Mat<Q>> {
        canonical_algebra(self.class, self.pq, self.k.as_ref())
    }
}

fn e(i: usize, j: usize) -> Mat<Q> {
    Mat::unit(4, i - 1, j - 1)
}

fn diag4(a: i64, b: i64) -> Mat<Q> {
    Mat::diag(vec![Q::from_integer(a), Q::from_integer(b), Q::from_integer(-a), Q::from_integer(-b)])
}

/// Basis of the canonical Lie algebra of each class (1-based matrix units).
/// `pq` defaults to `(1, 2)` and `k` to `0` when absent.
pub fn canonical_algebra(class: AbelianClassId, pq: Option<(i64, i64)>, k: Option<&Q>) -> Vec<Mat<Q>> {
    use AbelianClassId::*;
    match class {
        C1a => {
            let (p, q) = pq.unwrap_or((1, 2));
            vec![diag4(p, q)]
        }
        C1b => vec![diag4(1, 1)],
        C1c => vec![diag4(1, 0)],
        C2a => vec![e(1, 3)],
        C2b => vec![&e(1, 3) + &e(2, 4)],
        C2c => vec![nilpotent_normal_form(NilpotentCase::Regular, k)],
        C3 => vec![diag4(1, 0), diag4(0, 1)],
        C4 => vec![e(1, 3), diag4(0, 1)],
        C5a => vec![e(1, 3), e(2, 4)],
        C5b => vec![nilpotent_normal_form(NilpotentCase::Regular, None), e(1, 3)],
    }
}

fn swap_pairs(t: &Mat<Q>) -> Mat<Q> {
    frame_from_columns([t.column(1), t.column(0), t.column(3), t.column(2)])
}

/// `(t_k, t_{k+2}) → (t_{k+2}, −t_k)`, negating the `k`-th eigenvalue pair.
fn flip_pair(t: &Mat<Q>, k: usize) -> Mat<Q> {
    let mut cols: [Vec<Q>; 4] = [t.column(0), t.column(1), t.column(2), t.column(3)];
    let old = cols[k].clone();
    cols[k] = cols[k + 2].clone();
    cols[k + 2] = vscale(&old, &Q::from_integer(-1));
    frame_from_columns(cols)
}

fn span(mats: &[Mat<Q>]) -> Subspace<Q> {
    let vs: Vec<Vec<Q>> = mats.iter().map(flatten).collect();
    Subspace::spanned_by(16, vs.iter())
}

fn conj(t_inv: &Mat<Q>, x: &Mat<Q>, t: &Mat<Q>) -> Mat<Q> {
    &(t_inv * x) * t
}

/// Classifies an abelian subalgebra of `sp(4)` of dimension 1 or 2.
///
/// The algebra is first replaced by its hull, the span of the semisimple and
/// nilpotent Jordan parts of its elements.
pub fn classify_abelian(b: &LieBasis) -> Result<AbelianClass> {
    if b.n() != 2 {
        return Err(Error::UnsupportedDimension(b.n()));
    }
    if !is_abelian(b) {
        return Err(Error::NotAbelian);
    }
    match b.dim() {
        0 => return Err(Error::EmptyAlgebra),
        d if d > 2 => return Err(Error::DimensionTooLarge(d)),
        _ => {}
    }
    let els = b.elements();
    let mut semi = Vec::new();
    let mut nil = Vec::new();
    for x in &els {
        let (s, n) = jordan_decomposition(x)?;
        semi.push(s);
        nil.push(n);
    }
    let semi_space = span(&semi);
    let nil_space = span(&nil);
    let semi_basis: Vec<Mat<Q>> = semi_space.basis().iter().map(|v| super::unflatten(4, v)).collect();
    let nil_basis: Vec<Mat<Q>> = nil_space.basis().iter().map(|v| super::unflatten(4, v)).collect();
    let hull: Vec<Mat<Q>> = semi_basis.iter().chain(&nil_basis).cloned().collect();
    let (class, exact) = match (semi_basis.len(), nil_basis.len()) {
        (1, 0) => (one_torus(&semi_basis[0])?, true),
        (0, 1) => (one_nilpotent(&nil_basis[0])?, true),
        (2, 0) => (two_torus(&semi_basis)?, true),
        (1, 1) => (mixed(&semi_basis[0], &nil_basis[0])?, true),
        (0, 2) => (two_nilpotent(&nil_basis)?, true),
        (ds, dn) => {
            return Err(Error::UnlistedAbelianAlgebra(format!(
                "hull with {ds} semisimple and {dn} nilpotent directions"
            )))
        }
    };
    // an irrational eigenvalue ratio lands in the 2-torus, strictly larger than the hull
    let exact = exact && class.class.dim() == hull.len();
    verify(&class, &els, &hull, exact)?;
    Ok(class)
}

fn verify(c: &AbelianClass, els: &[Mat<Q>], hull: &[Mat<Q>], exact: bool) -> Result<()> {
    let t = &c.conjugator;
    if !is_symplectic(t)? {
        return Err(Error::InvariantViolation("abelian conjugator is not symplectic".into()));
    }
    let t_inv = t.inverse().ok_or_else(|| Error::InvariantViolation("singular conjugator".into()))?;
    let canon = span(&c.algebra());
    let conj_hull = span(&hull.iter().map(|x| conj(&t_inv, x, t)).collect::<Vec<_>>());
    let conj_b = span(&els.iter().map(|x| conj(&t_inv, x, t)).collect::<Vec<_>>());
    let ok = canon.contains_all(&conj_b) && if exact { canon.equals(&conj_hull) } else { canon.contains_all(&conj_hull) };
    if !ok {
        return Err(Error::InvariantViolation(format!("conjugated algebra is not the class {} algebra", c.class)));
    }
    Ok(())
}

fn rational_value(r: &Q) -> Option<num_rational::BigRational> {
    r.is_real().then(|| r.re().clone())
}

fn small(v: &num_bigint::BigInt) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvariantViolation(format!("eigenvalue ratio component {v} exceeds i64")))
}

fn one_torus(s: &Mat<Q>) -> Result<AbelianClass> {
    let (mut t, mus) = symplectic_eigenbasis(s)?;
    let [mut ma, mut mb] = mus;
    if ma.is_zero() {
        t = swap_pairs(&t);
        std::mem::swap(&mut ma, &mut mb);
    }
    if mb.is_zero() {
        return Ok(AbelianClass { class: AbelianClassId::C1c, pq: None, k: None, conjugator: t });
    }
    let r = &mb / &ma;
    let Some(r) = rational_value(&r) else {
        // exp(s·diag(1, r)) is Zariski dense in the 2-torus
        return Ok(AbelianClass { class: AbelianClassId::C3, pq: None, k: None, conjugator: t });
    };
    if r.is_negative() {
        t = flip_pair(&t, 1);
    }
    let r = r.abs();
    if r == num_rational::BigRational::from_integer(1.into()) {
        return Ok(AbelianClass { class: AbelianClassId::C1b, pq: None, k: None, conjugator: t });
    }
    // diag(1, a/b) ∝ diag(b, a)
    let (a, b) = (small(r.numer())?, small(r.denom())?);
    let (p, q) = if b < a { (b, a) } else { (a, b) };
    if b > a {
        t = swap_pairs(&t);
    }
    Ok(AbelianClass { class: AbelianClassId::C1a, pq: Some((p, q)), k: None, conjugator: t })
}

fn one_nilpotent(n: &Mat<Q>) -> Result<AbelianClass> {
    let c = classify_nilpotent_span(n)?;
    let class = match c.case {
        NilpotentCase::Rank1 => AbelianClassId::C2a,
        NilpotentCase::Rank2 => AbelianClassId::C2b,
        NilpotentCase::Regular => AbelianClassId::C2c,
    };
    Ok(AbelianClass { class, pq: None, k: c.lambda, conjugator: c.conjugator })
}

fn is_regular_semisimple(s: &Mat<Q>) -> bool {
    match super::jordan::sp4_eigenvalue_pairs(s) {
        Ok((a, b)) => !a.is_zero() && !b.is_zero() && a != b,
        Err(_) => false,
    }
}

fn two_torus(semi: &[Mat<Q>]) -> Result<AbelianClass> {
    let mut candidates = vec![semi[0].clone(), semi[1].clone()];
    for c in 1..=6 {
        candidates.push(&semi[0] + &semi[1].scale(&Q::from_integer(c)));
    }
    let reg = candidates.into_iter().find(is_regular_semisimple).ok_or_else(|| {
        Error::IrrationalEigenvalueRatio("no regular element with eigenvalues in Q(i) in the torus".into())
    })?;
    let (t, _) = symplectic_eigenbasis(&reg)?;
    Ok(AbelianClass { class: AbelianClassId::C3, pq: None, k: None, conjugator: t })
}

fn mixed(s: &Mat<Q>, n: &Mat<Q>) -> Result<AbelianClass> {
    let (mu_a, mu_b) = super::jordan::sp4_eigenvalue_pairs(s)?;
    let (mu, zero) = (mu_a, mu_b);
    if !zero.is_zero() || mu.is_zero() {
        return Err(Error::UnlistedAbelianAlgebra(format!(
            "semisimple part with eigenvalue pairs ±{mu}, ±{zero} next to a nilpotent"
        )));
    }
    let e0 = s.nullspace();
    let w = e0
        .iter()
        .find(|v| !n.mul_vec(v).iter().all(Q::is_zero))
        .ok_or_else(|| Error::InvariantViolation("nilpotent part vanishes on the zero eigenspace".into()))?;
    let nw = n.mul_vec(w);
    let kappa = omega(&nw, w);
    let t1 = vscale(&nw, &kappa.inv().ok_or_else(|| Error::InvariantViolation("ω(Nw, w) = 0".into()))?);
    let t3 = w.clone();
    let id = Mat::<Q>::identity(4);
    let u = (s - &id.scale(&mu)).nullspace();
    let v = (s + &id.scale(&mu)).nullspace();
    if u.len() != 1 || v.len() != 1 {
        return Err(Error::InvariantViolation("eigenvalues ±μ are not simple".into()));
    }
    let t2 = u[0].clone();
    let t4 = super::jordan::normalize_pair(&t2, &v[0])
        .ok_or_else(|| Error::InvariantViolation("ω(E_μ, E_−μ) = 0".into()))?;
    Ok(AbelianClass { class: AbelianClassId::C4, pq: None, k: None, conjugator: frame_from_columns([t1, t2, t3, t4]) })
}

fn two_nilpotent(nil: &[Mat<Q>]) -> Result<AbelianClass> {
    let mut pencil = vec![nil[0].clone(), nil[1].clone()];
    for c in 1..=3 {
        pencil.push(&nil[0] + &nil[1].scale(&Q::from_integer(c)));
    }
    if let Some(r) = pencil.iter().find(|x| !x.pow(3).is_zero()) {
        let c = classify_nilpotent_span(r)?;
        return Ok(AbelianClass { class: AbelianClassId::C5b, pq: None, k: None, conjugator: c.conjugator });
    }
    let r = pencil
        .iter()
        .find(|x| x.rank() == 2)
        .ok_or_else(|| Error::UnlistedAbelianAlgebra("two-dimensional algebra of rank-one nilpotents".into()))?;
    // image of a square-zero rank-2 Hamiltonian matrix is Lagrangian
    let (img, pivots) = r.transpose().rref();
    let ls: Vec<Vec<Q>> = (0..pivots.len()).map(|i| (0..4).map(|j| img.get(i, j).clone()).collect()).collect();
    let p = complete_lagrangian(&ls[0], &ls[1])?;
    let p_inv = p.inverse().expect("symplectic");
    let mut ys = Vec::new();
    for x in nil {
        let y = conj(&p_inv, x, &p);
        let lower_zero = (0..4).all(|i| (0..4).all(|j| (i < 2 && j >= 2) || y.get(i, j).is_zero()));
        if !lower_zero {
            return Err(Error::UnlistedAbelianAlgebra("nilpotents do not share a Lagrangian image".into()));
        }
        ys.push(y.block(0, 2, 2, 2));
    }
    // det(a·Y1 + b·Y2) = αa² + βab + γb²
    let alpha = ys[0].det();
    let gamma = ys[1].det();
    let beta = &(&(&ys[0] + &ys[1]).det() - &alpha) - &gamma;
    let disc = &(&beta * &beta) - &(&(&Q::from_integer(4) * &alpha) * &gamma);
    if disc.is_zero() {
        return Err(Error::UnlistedAbelianAlgebra("pencil of symmetric forms with a double degenerate member".into()));
    }
    let sq = disc
        .sqrt()
        .ok_or_else(|| Error::NonSquareNormalization(format!("pencil discriminant {disc} is not a square")))?;
    let roots: [(Q, Q); 2] = if !alpha.is_zero() {
        let two_a = &Q::from_integer(2) * &alpha;
        [(&(&(-&beta) + &sq) / &two_a, Q::one()), (&(&(-&beta) - &sq) / &two_a, Q::one())]
    } else {
        [(Q::one(), Q::zero()), (gamma.clone(), -beta.clone())]
    };
    let us: Vec<Vec<Q>> = roots
        .iter()
        .map(|(a, b)| {
            let z = &ys[0].scale(a) + &ys[1].scale(b);
            let j = (0..2).find(|&j| !z.get(j, j).is_zero()).expect("nonzero rank-one symmetric matrix");
            z.column(j)
        })
        .collect();
    let u = Mat::from_columns(&us);
    let u_inv_t = u.inverse().ok_or_else(|| Error::InvariantViolation("degenerate members are parallel".into()))?.transpose();
    let z2 = Mat::<Q>::zeros(2, 2);
    let block = Mat::from_blocks(&u, &z2, &z2, &u_inv_t);
    Ok(AbelianClass { class: AbelianClassId::C5a, pq: None, k: None, conjugator: &p * &block })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> Q {
        Q::from_integer(v)
    }

    fn basis(mats: &[Mat<Q>]) -> LieBasis {
        LieBasis::span(2, mats).unwrap()
    }

    #[test]
    fn examples() {
        let c = classify_abelian(&basis(&[diag4(1, 2)])).unwrap();
        assert_eq!((c.class, c.pq), (AbelianClassId::C1a, Some((1, 2))));
        let c = classify_abelian(&basis(&[e(1, 3), e(2, 4)])).unwrap();
        assert_eq!(c.class, AbelianClassId::C5a);
        let c = classify_abelian(&basis(&[diag4(1, 0), e(2, 4)])).unwrap();
        assert_eq!(c.class, AbelianClassId::C4);
    }

    #[test]
    fn normalization_of_ratios() {
        let c = classify_abelian(&basis(&[diag4(4, -2)])).unwrap();
        assert_eq!((c.class, c.pq), (AbelianClassId::C1a, Some((1, 2))));
        let c = classify_abelian(&basis(&[diag4(3, -3)])).unwrap();
        assert_eq!(c.class, AbelianClassId::C1b);
        let c = classify_abelian(&basis(&[diag4(0, 7)])).unwrap();
        assert_eq!(c.class, AbelianClassId::C1c);
        let ratio = Mat::diag(vec![q(1), Q::i(), q(-1), -Q::i()]);
        assert_eq!(classify_abelian(&basis(&[ratio])).unwrap().class, AbelianClassId::C3);
    }

    #[test]
    fn every_class_is_recovered_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for class in AbelianClassId::ALL {
            let pq = (class == AbelianClassId::C1a).then_some((2, 3));
            let k = q(4);
            let alg = canonical_algebra(class, pq, Some(&k));
            for _ in 0..5 {
                let s = random::constant_symplectic(&mut rng, 2, 4);
                let s_inv = s.inverse().unwrap();
                let mats: Vec<Mat<Q>> = alg.iter().map(|x| &(&s * x) * &s_inv).collect();
                let c = classify_abelian(&basis(&mats)).unwrap();
                assert_eq!(c.class, class);
                assert_eq!(c.pq, pq);
            }
        }
    }

    #[test]
    fn rejections() {
        let y = |i, j| crate::symplectic::ham_to_matrix(&crate::symplectic::QuadraticHamiltonian::monomial(2, i, j, q(1)));
        assert!(matches!(classify_abelian(&basis(&[y(2, 2), y(2, 3), y(3, 3)])), Err(Error::DimensionTooLarge(3))));
        assert!(matches!(classify_abelian(&basis(&[y(2, 2), y(2, 3)])), Err(Error::UnlistedAbelianAlgebra(_))));
        assert!(matches!(classify_abelian(&basis(&[y(0, 0), y(2, 2)])), Err(Error::NotAbelian)));
        assert!(matches!(classify_abelian(&LieBasis::empty(2)), Err(Error::EmptyAlgebra)));
    }
}
