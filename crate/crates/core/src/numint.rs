//! Fixed-step RK4 integration of `Φ' = M(t)Φ` and drift diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{GaussianRational, Poly, RatFunc};
use crate::symplectic::{standard_j, QuadraticHamiltonian};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
        }
    }
}

/// Samples of the fundamental matrix at every step, starting from `Φ(t0) = I`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<(f64, CMatrix)>,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    pub fn final_matrix(&self) -> &CMatrix {
        &self.samples.last().expect("trajectory has at least one sample").1
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().expect("trajectory has at least one sample").0
    }

    pub fn size(&self) -> usize {
        self.samples[0].1.nrows()
    }
}

/// Entrywise evaluation at a real time.
pub fn eval_matrix(m: &Mat<RatFunc>, t: f64) -> Result<CMatrix> {
    let z = Complex64::new(t, 0.0);
    let mut out = CMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = m.get(i, j).eval(z).map_err(|_| Error::PoleOnPath(t))?;
        }
    }
    Ok(out)
}

pub fn to_cmatrix(m: &Mat<GaussianRational>) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_complex64())
}

fn rat(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or(Error::InvalidInterval(v, v))
}

fn sign_at(p: &Poly, t: &BigRational) -> i32 {
    let v = p.eval_exact(&GaussianRational::real(t.clone()));
    let re = v.re();
    if re.is_zero() {
        0
    } else if re.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while let Some(last) = seq.last().filter(|q| !q.is_zero()) {
        let prev = &seq[seq.len() - 2];
        let (_, r) = prev.div_rem(last);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq.retain(|q| !q.is_zero());
    seq
}

fn sign_changes(seq: &[Poly], t: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, t)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of a squarefree real polynomial in `(a, b]`.
fn roots_in(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Real points of `[t0, t1]` where the complex polynomial `den` vanishes are
/// the real roots of `gcd(Re den, Im den)`.
fn real_pole_in(den: &Poly, t0: &BigRational, t1: &BigRational) -> Option<f64> {
    if den.is_constant() {
        return None;
    }
    let (re, im) = den.real_imag_parts();
    let g = re.gcd(&im);
    if g.is_constant() {
        return None;
    }
    let g = g.div_exact(&g.gcd(&g.derivative()));
    if sign_at(&g, t0) == 0 {
        return t0.to_f64();
    }
    let seq = sturm_sequence(&g);
    if roots_in(&seq, t0, t1) == 0 {
        return None;
    }
    let two = BigRational::from_integer(2.into());
    let (mut a, mut b) = (t0.clone(), t1.clone());
    for _ in 0..64 {
        let mid = (&a + &b) / &two;
        if roots_in(&seq, &a, &mid) > 0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    b.to_f64()
}

/// First real pole of any entry of `m` on `[t0, t1]`, located to double precision.
pub fn find_pole(m: &Mat<RatFunc>, t0: f64, t1: f64) -> Result<Option<f64>> {
    let (a, b) = (rat(t0)?, rat(t1)?);
    let mut dens: Vec<&Poly> = Vec::new();
    for e in m.entries() {
        if !dens.contains(&e.den()) {
            dens.push(e.den());
        }
    }
    let poles = dens.into_iter().filter_map(|d| real_pole_in(d, &a, &b));
    Ok(poles.min_by(|x, y| x.total_cmp(y)))
}

/// Classical RK4 on `Φ' = M(t)Φ` over `[t0, t1]` with `steps` equal steps.
pub fn integrate_fundamental(m: &Mat<RatFunc>, t0: f64, t1: f64, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::StepCountTooSmall(steps));
    }
    if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
        return Err(Error::InvalidInterval(t0, t1));
    }
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if let Some(t) = find_pole(m, t0, t1)? {
        return Err(Error::PoleOnPath(t));
    }
    let h = (t1 - t0) / steps as f64;
    let hc = Complex64::new(h, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let sixth = Complex64::new(1.0 / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut phi = CMatrix::identity(m.rows(), m.cols());
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((t0, phi.clone()));
    let mut m_left = eval_matrix(m, t0)?;
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let t_next = if k + 1 == steps { t1 } else { t0 + (k + 1) as f64 * h };
        let m_mid = eval_matrix(m, t + 0.5 * h)?;
        let m_right = eval_matrix(m, t_next)?;
        let k1 = &m_left * &phi;
        let k2 = &m_mid * (&phi + &k1 * (hc * half));
        let k3 = &m_mid * (&phi + &k2 * (hc * half));
        let k4 = &m_right * (&phi + &k3 * hc);
        phi += (k1 + k2 * two + k3 * two + k4) * (hc * sixth);
        samples.push((t_next, phi.clone()));
        m_left = m_right;
    }
    Ok(Trajectory { samples, method: Method::Rk4, step: h })
}

/// `max ‖A − B‖` over entries.
pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry of `ΦᵗJΦ − J` over all samples.
pub fn symplectic_drift(tr: &Trajectory) -> f64 {
    let j = to_cmatrix(&standard_j::<GaussianRational>(tr.size() / 2));
    tr.samples
        .iter()
        .map(|(_, phi)| max_entry_diff(&(phi.transpose() * &j * phi), &j))
        .fold(0.0, f64::max)
}

fn check_len(expected: usize, z0: &[Complex64], tr: &Trajectory) -> Result<()> {
    if z0.len() != expected || tr.size() != expected {
        return Err(Error::DimensionMismatch(format!(
            "form on {expected} coordinates, initial point of length {}, trajectory of size {}",
            z0.len(),
            tr.size()
        )));
    }
    Ok(())
}

fn apply(phi: &CMatrix, z0: &[Complex64]) -> Vec<Complex64> {
    (phi * nalgebra::DVector::from_column_slice(z0)).iter().copied().collect()
}

/// `max |F(Φ(t)z0) − F(z0)|` over the samples.
pub fn invariant_drift(f: &QuadraticHamiltonian<GaussianRational>, tr: &Trajectory, z0: &[Complex64]) -> Result<f64> {
    check_len(2 * f.n(), z0, tr)?;
    let start = f.eval_complex(z0);
    Ok(tr
        .samples
        .iter()
        .map(|(_, phi)| (f.eval_complex(&apply(phi, z0)) - start).norm())
        .fold(0.0, f64::max))
}

fn eval_timed(f: &QuadraticHamiltonian<RatFunc>, t: f64, z: &[Complex64]) -> Result<Complex64> {
    let tc = Complex64::new(t, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for ((i, j), c) in f.monomials() {
        acc += c.eval(tc).map_err(|_| Error::PoleOnPath(t))? * z[i] * z[j];
    }
    Ok(acc)
}

/// Drift of a time-dependent form: `max |F(t, Φ(t)z0) − F(t0, z0)|`.
pub fn invariant_drift_timed(f: &QuadraticHamiltonian<RatFunc>, tr: &Trajectory, z0: &[Complex64]) -> Result<f64> {
    check_len(2 * f.n(), z0, tr)?;
    let (t0, _) = &tr.samples[0];
    let start = eval_timed(f, *t0, z0)?;
    let mut worst: f64 = 0.0;
    for (t, phi) in &tr.samples {
        worst = worst.max((eval_timed(f, *t, &apply(phi, z0))? - start).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{random_symplectic_frame, transform_system};
    use crate::scalars::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    fn diag(entries: &[&str]) -> Mat<RatFunc> {
        Mat::diag(entries.iter().map(|s| rf(s)).collect())
    }

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn exp_diag(ds: &[f64], t: f64) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(ds.len(), ds.iter().map(|d| c((d * t).exp()))))
    }

    #[test]
    fn constant_diagonal_matches_exponential() {
        let m = diag(&["1", "1/2", "-1", "-1/2"]);
        let tr = integrate_fundamental(&m, 0.0, 1.0, 1000).unwrap();
        assert_eq!(tr.samples.len(), 1001);
        assert_eq!(tr.final_time(), 1.0);
        let err = max_entry_diff(tr.final_matrix(), &exp_diag(&[1.0, 0.5, -1.0, -0.5], 1.0));
        assert!(err < 1e-9, "{err}");
        assert!(symplectic_drift(&tr) < 1e-9);
    }

    #[test]
    fn zero_matrix_stays_identity() {
        let m = Mat::<RatFunc>::zeros(4, 4);
        let tr = integrate_fundamental(&m, 0.0, 3.0, 17).unwrap();
        assert!(tr.samples.iter().all(|(_, p)| *p == CMatrix::identity(4, 4)));
        assert_eq!(symplectic_drift(&tr), 0.0);
    }

    #[test]
    fn reciprocal_time() {
        let m = diag(&["1/t", "0", "-1/t", "0"]);
        let tr = integrate_fundamental(&m, 1.0, 2.0, 1000).unwrap();
        let expected = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), c(1.0), c(0.5), c(1.0)]));
        assert!(max_entry_diff(tr.final_matrix(), &expected) < 1e-9);
    }

    #[test]
    fn non_hamiltonian_drifts() {
        let m = diag(&["1", "1", "1", "1"]);
        let tr = integrate_fundamental(&m, 0.0, 1.0, 1000).unwrap();
        let d = symplectic_drift(&tr);
        assert!(d > 0.1);
        assert!((d - (2f64.exp() - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn invariant_drifts() {
        let m = diag(&["1", "0", "-1", "0"]);
        let tr = integrate_fundamental(&m, 0.0, 1.0, 1000).unwrap();
        let z0 = [c(1.0), c(0.5), c(-0.75), c(2.0)];
        let x1y1 = QuadraticHamiltonian::monomial(2, 0, 2, GaussianRational::one());
        let x1sq = QuadraticHamiltonian::monomial(2, 0, 0, GaussianRational::one());
        assert!(invariant_drift(&x1y1, &tr, &z0).unwrap() < 1e-9);
        let d = invariant_drift(&x1sq, &tr, &z0).unwrap();
        assert!(d > 1.0);
        assert!((d - (2f64.exp() - 1.0)).abs() < 1e-6);
        assert_eq!(invariant_drift(&x1sq, &tr, &[c(0.0); 4]).unwrap(), 0.0);
        assert!(invariant_drift(&x1sq, &tr, &[c(0.0); 3]).is_err());
    }

    #[test]
    fn timed_invariant() {
        // x' = x/t, y' = -y/t keeps (x1 y1) and x1/t fixed; (1/t²)x1² is conserved.
        let m = diag(&["1/t", "0", "-1/t", "0"]);
        let tr = integrate_fundamental(&m, 1.0, 3.0, 2000).unwrap();
        let f = QuadraticHamiltonian::monomial(2, 0, 0, rf("1/t^2"));
        let z0 = [c(1.5), c(0.0), c(0.0), c(0.0)];
        assert!(invariant_drift_timed(&f, &tr, &z0).unwrap() < 1e-9);
    }

    #[test]
    fn poles_are_rejected() {
        let m = diag(&["1/(t-1/2)", "0", "-1/(t-1/2)", "0"]);
        match integrate_fundamental(&m, 0.0, 1.0, 10) {
            Err(Error::PoleOnPath(t)) => assert!((t - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(integrate_fundamental(&m, 0.6, 1.0, 10).is_ok());
        assert!(matches!(integrate_fundamental(&m, 0.5, 1.0, 10), Err(Error::PoleOnPath(_))));
        assert!(matches!(integrate_fundamental(&m, 0.0, 0.5, 10), Err(Error::PoleOnPath(_))));
    }

    #[test]
    fn complex_and_repeated_poles() {
        // 1/(t² + 1) has no real pole; 1/(t - i) neither.
        let m = diag(&["1/(t^2+1)", "1/(t-i)", "-1/(t^2+1)", "-1/(t-i)"]);
        assert!(integrate_fundamental(&m, -5.0, 5.0, 100).is_ok());
        let m = diag(&["1/(t^2-2)^2", "0", "-1/(t^2-2)^2", "0"]);
        match integrate_fundamental(&m, 0.0, 2.0, 10) {
            Err(Error::PoleOnPath(t)) => assert!((t - 2f64.sqrt()).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn argument_errors() {
        let m = Mat::<RatFunc>::zeros(2, 2);
        assert!(matches!(integrate_fundamental(&m, 0.0, 1.0, 0), Err(Error::StepCountTooSmall(0))));
        assert!(matches!(integrate_fundamental(&m, 1.0, 1.0, 5), Err(Error::InvalidInterval(..))));
        assert!(matches!(integrate_fundamental(&m, 0.0, f64::NAN, 5), Err(Error::InvalidInterval(..))));
    }

    #[test]
    fn fourth_order_convergence() {
        let m = diag(&["1", "1/2", "-1", "-1/2"]);
        let exact = exp_diag(&[1.0, 0.5, -1.0, -0.5], 1.0);
        let e1 = max_entry_diff(integrate_fundamental(&m, 0.0, 1.0, 20).unwrap().final_matrix(), &exact);
        let e2 = max_entry_diff(integrate_fundamental(&m, 0.0, 1.0, 40).unwrap().final_matrix(), &exact);
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn deterministic() {
        let m = diag(&["t", "1/(t+3)", "-t", "-1/(t+3)"]);
        let a = integrate_fundamental(&m, 0.0, 1.0, 50).unwrap();
        let b = integrate_fundamental(&m, 0.0, 1.0, 50).unwrap();
        assert_eq!(a.final_matrix(), b.final_matrix());
    }

    #[test]
    fn commuting_square() {
        let m = diag(&["1", "t", "-1", "-t"]);
        let mut checked = 0;
        for seed in 0..4 {
            let frame = random_symplectic_frame(seed, 2, 2);
            let (t0, t1) = (0.1, 0.9);
            if find_pole(frame.matrix(), t0, t1).unwrap().is_some()
                || find_pole(frame.inverse_matrix(), t0, t1).unwrap().is_some()
            {
                continue;
            }
            let mbar = transform_system(&m, &frame).unwrap();
            let phi = integrate_fundamental(&m, t0, t1, 2000).unwrap();
            let phibar = integrate_fundamental(&mbar, t0, t1, 2000).unwrap();
            let lhs = eval_matrix(frame.matrix(), t1).unwrap() * phi.final_matrix();
            let rhs = phibar.final_matrix() * eval_matrix(frame.matrix(), t0).unwrap();
            let scale = lhs.iter().map(|x| x.norm()).fold(1.0, f64::max);
            assert!(max_entry_diff(&lhs, &rhs) / scale < 1e-7, "seed {seed}");
            checked += 1;
        }
        assert!(checked > 0);
    }
}
