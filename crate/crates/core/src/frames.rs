//! Time-dependent symplectic changes of frame `ξ = B(t)·z`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::random;
use crate::scalars::{GaussianRational, RatFunc};
use crate::symplectic::{
    ham_to_matrix, is_hamiltonian_matrix, is_symplectic, matrix_to_ham, standard_j, symplectic_inverse,
    QuadraticHamiltonian,
};

/// A symplectic frame `B(t)` together with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameChange {
    n: usize,
    b: Mat<RatFunc>,
    b_inv: Mat<RatFunc>,
}

impl FrameChange {
    /// Checks `BᵗJB = J` identically in `t`.
    ///
    /// The inverse is taken as `−J Bᵗ J` and compared with Gauss–Jordan
    /// elimination.
    pub fn new(b: Mat<RatFunc>) -> Result<Self> {
        let n = b.check_even_square()?;
        if !is_symplectic(&b)? {
            return Err(Error::NotSymplectic);
        }
        let b_inv = symplectic_inverse(&b);
        match b.inverse() {
            Some(g) if g == b_inv => {}
            _ => return Err(Error::InvariantViolation("symplectic inverse disagrees with elimination".into())),
        }
        Ok(Self { n, b, b_inv })
    }

    pub fn constant(b: &Mat<GaussianRational>) -> Result<Self> {
        Self::new(b.map(|c| RatFunc::constant(c.clone())))
    }

    pub fn identity(n: usize) -> Self {
        Self { n, b: Mat::identity(2 * n), b_inv: Mat::identity(2 * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat<RatFunc> {
        &self.b
    }

    pub fn inverse_matrix(&self) -> &Mat<RatFunc> {
        &self.b_inv
    }

    pub fn inverse(&self) -> Self {
        Self { n: self.n, b: self.b_inv.clone(), b_inv: self.b.clone() }
    }

    /// `self` followed by `next`: the frame `B_next·B_self`.
    pub fn then(&self, next: &FrameChange) -> Self {
        Self { n: self.n, b: &next.b * &self.b, b_inv: &self.b_inv * &next.b_inv }
    }

    /// `ḂB⁻¹`, the gauge part of the transported system.
    pub fn gauge(&self) -> Mat<RatFunc> {
        &self.b.derivative() * &self.b_inv
    }

    fn check_dim(&self, size: usize) -> Result<()> {
        if size != 2 * self.n {
            return Err(Error::DimensionMismatch(format!("system of size {size} vs frame of size {}", 2 * self.n)));
        }
        Ok(())
    }
}

/// `M̄ = ḂB⁻¹ + BMB⁻¹`.
pub fn transform_system(m: &Mat<RatFunc>, frame: &FrameChange) -> Result<Mat<RatFunc>> {
    m.check_even_square()?;
    frame.check_dim(m.rows())?;
    let out = &frame.gauge() + &(&(&frame.b * m) * &frame.b_inv);
    debug_assert!(is_hamiltonian_matrix(&out).unwrap_or(false));
    Ok(out)
}

/// Transported Hamiltonian, defined through the dictionary.
pub fn transform_hamiltonian(
    h: &QuadraticHamiltonian<RatFunc>,
    frame: &FrameChange,
) -> Result<QuadraticHamiltonian<RatFunc>> {
    let m = transform_system(&ham_to_matrix(h), frame)?;
    matrix_to_ham(&m)
}

/// `H̄ = H∘B⁻¹ − ½ zᵗ(JḂB⁻¹)z`, the scalar form of the transport.
pub fn transform_hamiltonian_scalar(
    h: &QuadraticHamiltonian<RatFunc>,
    frame: &FrameChange,
) -> Result<QuadraticHamiltonian<RatFunc>> {
    frame.check_dim(2 * h.n())?;
    let pulled = h.pullback(&frame.b_inv);
    // JḂB⁻¹ is symmetric, so it is directly the Hessian of ½ zᵗ(JḂB⁻¹)z.
    let k = &standard_j::<RatFunc>(frame.n) * &frame.gauge();
    let correction = QuadraticHamiltonian::from_hessian(&k)?;
    Ok(&pulled - &correction)
}

/// Seeded product of `complexity` elementary symplectic factors over `Q(i)[t]`,
/// including scalings by `t + k` (`k ≥ 0`). `complexity = 0` is the identity.
pub fn random_symplectic_frame(seed: u64, n: usize, complexity: usize) -> FrameChange {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random::ratfunc_symplectic(&mut rng, n, complexity);
    FrameChange::new(b).expect("products of elementary symplectic factors are symplectic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    fn scaling_frame() -> FrameChange {
        FrameChange::new(Mat::diag(vec![rf("t"), rf("1"), rf("1/t"), rf("1")])).unwrap()
    }

    #[test]
    fn scaling_frame_generates_dilation() {
        let m = transform_system(&Mat::zeros(4, 4), &scaling_frame()).unwrap();
        assert_eq!(m, Mat::diag(vec![rf("1/t"), rf("0"), rf("-1/t"), rf("0")]));
        let h = transform_hamiltonian(&QuadraticHamiltonian::zero(2), &scaling_frame()).unwrap();
        assert_eq!(h, QuadraticHamiltonian::monomial(2, 0, 2, rf("1/t")));
        assert_eq!(transform_hamiltonian_scalar(&QuadraticHamiltonian::zero(2), &scaling_frame()).unwrap(), h);
    }

    #[test]
    fn identity_and_constant_frames() {
        let h = QuadraticHamiltonian::monomial(2, 1, 3, rf("t^2+1"));
        let id = FrameChange::identity(2);
        assert_eq!(transform_hamiltonian(&h, &id).unwrap(), h);
        let b: Mat<GaussianRational> = Mat::from_i64(&[&[1, 0, 2, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let f = FrameChange::constant(&b).unwrap();
        let m = ham_to_matrix(&h);
        let expected = &(f.matrix() * &m) * f.inverse_matrix();
        assert_eq!(transform_system(&m, &f).unwrap(), expected);
        assert_eq!(transform_hamiltonian_scalar(&h, &f).unwrap(), h.pullback(f.inverse_matrix()));
    }

    #[test]
    fn non_symplectic_rejected() {
        let b = Mat::diag(vec![rf("2"), rf("1"), rf("1"), rf("1")]);
        assert!(matches!(FrameChange::new(b), Err(Error::NotSymplectic)));
    }

    #[test]
    fn random_frames() {
        assert_eq!(random_symplectic_frame(1, 2, 0), FrameChange::identity(2));
        for seed in 0..5 {
            let f = random_symplectic_frame(seed, 2, 5);
            assert!(is_symplectic(f.matrix()).unwrap());
        }
    }
}
