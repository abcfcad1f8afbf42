//! Normal forms of nilpotent matrices in `sp(4)` under symplectic conjugation.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalars::GaussianRational;
use crate::symplectic::{is_hamiltonian_matrix, is_symplectic};

use super::jordan::{complement_plane, frame_from_columns, omega, unit_vec, vadd, vscale, vsub};

type Q = GaussianRational;

/// Kernel dimension 3, 2 and 1 respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NilpotentCase {
    Rank1,
    Rank2,
    Regular,
}

/// Result of [`classify_nilpotent`]: `T⁻¹·(scale·A)·T` is the normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentClass {
    pub case: NilpotentCase,
    pub lambda: Option<Q>,
    pub conjugator: Mat<Q>,
    pub scale: Q,
}

impl NilpotentClass {
    pub fn normal_form(&self) -> Mat<Q> {
        nilpotent_normal_form(self.case, self.lambda.as_ref())
    }
}

/// `E13`, `E13 + E24`, or `E12 + λE13 + E24 − E43` (1-based matrix units).
pub fn nilpotent_normal_form(case: NilpotentCase, lambda: Option<&Q>) -> Mat<Q> {
    let e = |i: usize, j: usize| Mat::<Q>::unit(4, i - 1, j - 1);
    match case {
        NilpotentCase::Rank1 => e(1, 3),
        NilpotentCase::Rank2 => &e(1, 3) + &e(2, 4),
        NilpotentCase::Regular => {
            let l = lambda.cloned().unwrap_or_else(Q::zero);
            &(&(&e(1, 2) + &e(1, 3).scale(&l)) + &e(2, 4)) - &e(4, 3)
        }
    }
}

/// Exact classification; the normalization may need square roots in `Q(i)`.
pub fn classify_nilpotent(a: &Mat<Q>) -> Result<NilpotentClass> {
    classify(a, false)
}

/// Classification of the line `span{A}`: `A` may be rescaled, which avoids
/// square roots in cases 1 and 3. The chosen factor is reported in `scale`.
pub fn classify_nilpotent_span(a: &Mat<Q>) -> Result<NilpotentClass> {
    classify(a, true)
}

fn classify(a: &Mat<Q>, allow_scale: bool) -> Result<NilpotentClass> {
    if a.rows() != 4 || a.cols() != 4 {
        return Err(Error::UnsupportedDimension(a.rows() / 2));
    }
    if !is_hamiltonian_matrix(a)? {
        return Err(Error::NotHamiltonian);
    }
    if !a.pow(4).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let kernel_dim = 4 - a.rank();
    let a2 = a * a;
    let a3 = &a2 * a;
    let out = match kernel_dim {
        3 => rank_one(a, allow_scale)?,
        2 if a2.is_zero() => rank_two(a)?,
        1 if !a3.is_zero() => regular(a, &a3, allow_scale)?,
        _ => {
            let detail = match kernel_dim {
                4 => "zero matrix".to_string(),
                2 => "kernel of dimension 2 with A² ≠ 0".to_string(),
                _ => format!("kernel of dimension {kernel_dim} with A³ = 0"),
            };
            return Err(Error::UnreachableKernelDim { kernel_dim, detail });
        }
    };
    verify(a, &out)?;
    Ok(out)
}

fn verify(a: &Mat<Q>, c: &NilpotentClass) -> Result<()> {
    let t = &c.conjugator;
    if !is_symplectic(t)? {
        return Err(Error::InvariantViolation("nilpotent conjugator is not symplectic".into()));
    }
    let t_inv = t.inverse().ok_or_else(|| Error::InvariantViolation("singular conjugator".into()))?;
    if &(&t_inv * &a.scale(&c.scale)) * t != c.normal_form() {
        return Err(Error::InvariantViolation("conjugated matrix differs from the normal form".into()));
    }
    Ok(())
}

fn first_nonvanishing(m: &Mat<Q>) -> Vec<Q> {
    (0..4)
        .map(|k| unit_vec(4, k))
        .find(|e| !m.mul_vec(e).iter().all(Q::is_zero))
        .expect("nonzero matrix")
}

/// Symplectic basis of the ω-complement of `span{e, f}` with `ω(e, f) = 1`.
fn complement_pair(e: &[Q], f: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    let basis: Vec<Vec<Q>> = (0..4).map(|k| unit_vec(4, k)).collect();
    complement_plane(e, f, &basis)
}

fn rank_one(a: &Mat<Q>, allow_scale: bool) -> Result<NilpotentClass> {
    let mut w = first_nonvanishing(a);
    let kappa = omega(&a.mul_vec(&w), &w);
    let scale = if allow_scale {
        kappa.inv().expect("ω(Aw, w) ≠ 0 for rank one")
    } else {
        let r = kappa
            .sqrt()
            .ok_or_else(|| Error::NonSquareNormalization(format!("ω(Aw, w) = {kappa} has no square root")))?;
        w = vscale(&w, &r.inv().expect("nonzero"));
        Q::one()
    };
    let sa = a.scale(&scale);
    let t3 = w;
    let t1 = sa.mul_vec(&t3);
    let (t2, t4) = complement_pair(&t1, &t3)?;
    Ok(NilpotentClass {
        case: NilpotentCase::Rank1,
        lambda: None,
        conjugator: frame_from_columns([t1, t2, t3, t4]),
        scale,
    })
}

fn rank_two(a: &Mat<Q>) -> Result<NilpotentClass> {
    let mut span = Subspace::spanned_by(4, a.nullspace().iter());
    let comp: Vec<Vec<Q>> = (0..4).map(|k| unit_vec(4, k)).filter(|e| span.insert(e)).collect();
    let g = |u: &[Q], v: &[Q]| omega(&a.mul_vec(u), v);
    // diagonalize g on the complement
    let (mut w1, mut w2) = (comp[0].clone(), comp[1].clone());
    if g(&w1, &w1).is_zero() {
        if !g(&w2, &w2).is_zero() {
            std::mem::swap(&mut w1, &mut w2);
        } else {
            w1 = vadd(&w1, &w2);
        }
    }
    let ga = g(&w1, &w1);
    let w2 = vsub(&w2, &vscale(&w1, &(&g(&w1, &w2) / &ga)));
    let gb = g(&w2, &w2);
    let (t3, mut t4) = match (ga.sqrt(), gb.sqrt()) {
        (Some(ra), Some(rb)) => (vscale(&w1, &ra.inv().expect("nonzero")), vscale(&w2, &rb.inv().expect("nonzero"))),
        _ => {
            let d = (&ga * &gb)
                .sqrt()
                .ok_or_else(|| Error::NonSquareNormalization(format!("Gram determinant {} is not a square", &ga * &gb)))?;
            // r² = −b/a, p = r·w1 + w2 and q = −r·w1 + w2 are g-isotropic with g(p, q) = 2b
            let r = &(&Q::i() * &d) / &ga;
            let s = (&Q::from_integer(4) * &gb).inv().expect("nonzero");
            let p = vscale(&vadd(&vscale(&w1, &r), &w2), &s);
            let q = vsub(&w2, &vscale(&w1, &r));
            (vadd(&p, &q), vscale(&vsub(&p, &q), &Q::i()))
        }
    };
    let t1 = a.mul_vec(&t3);
    let t2 = a.mul_vec(&t4);
    let kappa = omega(&t3, &t4);
    t4 = vadd(&t4, &vscale(&t1, &kappa));
    Ok(NilpotentClass {
        case: NilpotentCase::Rank2,
        lambda: None,
        conjugator: frame_from_columns([t1, t2, t3, t4]),
        scale: Q::one(),
    })
}

fn regular(a: &Mat<Q>, a3: &Mat<Q>, allow_scale: bool) -> Result<NilpotentClass> {
    let mut w = first_nonvanishing(a3);
    let kappa = -omega(&a3.mul_vec(&w), &w);
    let scale = if allow_scale {
        // (cA, κw) with c = 1/κ gives −ω((cA)³κw, κw) = 1
        w = vscale(&w, &kappa);
        kappa.inv().expect("ω(A³w, w) ≠ 0 for the regular case")
    } else {
        let r = kappa
            .sqrt()
            .ok_or_else(|| Error::NonSquareNormalization(format!("−ω(A³w, w) = {kappa} has no square root")))?;
        w = vscale(&w, &r.inv().expect("nonzero"));
        Q::one()
    };
    let sa = a.scale(&scale);
    let aw = sa.mul_vec(&w);
    let a2w = sa.mul_vec(&aw);
    let a3w = sa.mul_vec(&a2w);
    let lambda = omega(&aw, &w);
    let minus = Q::from_integer(-1);
    let t1 = vscale(&a3w, &minus);
    let t2 = vscale(&a2w, &minus);
    let t4 = vsub(&vscale(&a3w, &(-&lambda)), &aw);
    Ok(NilpotentClass {
        case: NilpotentCase::Regular,
        lambda: Some(lambda),
        conjugator: frame_from_columns([t1, t2, w, t4]),
        scale,
    })
}
