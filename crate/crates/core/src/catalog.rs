//! The eleven canonical forms of integrable quadratic Hamiltonians with two
//! degrees of freedom, their invariants, row matching and the end-to-end
//! integrability certificate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frames::{transform_hamiltonian, FrameChange};
use crate::liealg::{
    classify_abelian, coefficient_algebra, first_integrals_from_abelian, functionally_independent, is_abelian,
    non_commuting_pair, normalize_form, AbelianClass, AbelianClassId, LieBasis,
};
use crate::linalg::Mat;
use crate::scalars::{GaussianRational, ParamPoly, RatFunc};
use crate::symplectic::{ham_to_matrix, motion_matrix, poisson_bracket, QuadraticHamiltonian};

type Q = GaussianRational;

/// Indices of the coordinates `ξ₁, ξ₂, η₁, η₂`.
pub const XI1: usize = 0;
pub const XI2: usize = 1;
pub const ETA1: usize = 2;
pub const ETA2: usize = 3;

/// Parameters that must come out constant when matching.
const CONSTANT_SYMBOLS: [&str; 2] = ["p/q", "λ"];

/// Generators multiplied by the product of `symbols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientGroup {
    pub symbols: Vec<&'static str>,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFormRecord {
    pub row: usize,
    /// Normal form as printed in the table.
    pub printed: &'static str,
    pub generators: Vec<QuadraticHamiltonian<Q>>,
    pub groups: Vec<CoefficientGroup>,
    pub galois: &'static str,
    pub invariants: Vec<QuadraticHamiltonian<Q>>,
    pub params: Vec<&'static str>,
    pub note: Option<&'static str>,
}

impl CanonicalFormRecord {
    /// `Σ_{α ∈ group} K_α`.
    pub fn group_sum(&self, group: usize) -> QuadraticHamiltonian<Q> {
        self.groups[group]
            .members
            .iter()
            .fold(QuadraticHamiltonian::zero(2), |acc, &k| &acc + &self.generators[k])
    }

    /// The normal form with its parameters as formal symbols.
    pub fn symbolic_form(&self) -> QuadraticHamiltonian<ParamPoly> {
        let mut acc = QuadraticHamiltonian::<ParamPoly>::zero(2);
        for (i, g) in self.groups.iter().enumerate() {
            let coef = g.symbols.iter().fold(ParamPoly::constant(Q::one()), |p, s| p * ParamPoly::symbol(s));
            let sum = self.group_sum(i).map(|c| ParamPoly::constant(c.clone()));
            acc = &acc + &sum.scale(&coef);
        }
        acc
    }

    /// The normal form with `values` substituted for its parameters.
    pub fn instantiate(&self, values: &BTreeMap<String, RatFunc>) -> Result<QuadraticHamiltonian<RatFunc>> {
        let mut acc = QuadraticHamiltonian::<RatFunc>::zero(2);
        for (i, g) in self.groups.iter().enumerate() {
            let mut coef = RatFunc::one();
            for s in &g.symbols {
                let v = values
                    .get(*s)
                    .ok_or_else(|| Error::DimensionMismatch(format!("row {} needs a value for {s}", self.row)))?;
                coef = &coef * v;
            }
            acc = &acc + &self.group_sum(i).to_ratfunc().scale(&coef);
        }
        Ok(acc)
    }
}

fn quad(terms: &[(usize, usize, i64, i64)]) -> QuadraticHamiltonian<Q> {
    let m: BTreeMap<(usize, usize), Q> =
        terms.iter().map(|&(i, j, num, den)| ((i.min(j), i.max(j)), Q::from_ratio(num, den))).collect();
    QuadraticHamiltonian::from_monomials(2, &m)
}

fn group(symbols: &[&'static str], members: &[usize]) -> CoefficientGroup {
    CoefficientGroup { symbols: symbols.to_vec(), members: members.to_vec() }
}

/// All eleven rows, in table order.
pub fn catalog_rows() -> Vec<CanonicalFormRecord> {
    let x1y1 = quad(&[(XI1, ETA1, 1, 1)]);
    let x2y2 = quad(&[(XI2, ETA2, 1, 1)]);
    let y1sq_half = quad(&[(ETA1, ETA1, 1, 2)]);
    let y2sq_half = quad(&[(ETA2, ETA2, 1, 2)]);
    let y1sq = quad(&[(ETA1, ETA1, 1, 1)]);
    let y2sq = quad(&[(ETA2, ETA2, 1, 1)]);
    let x2sq = quad(&[(XI2, XI2, 1, 1)]);
    let x2y1 = quad(&[(XI2, ETA1, 1, 1)]);
    let chain = quad(&[(XI2, ETA1, 2, 1), (ETA2, ETA2, 1, 1)]);
    let all: Vec<QuadraticHamiltonian<Q>> =
        (0..4).flat_map(|i| (i..4).map(move |j| quad(&[(i, j, 1, 1)]))).collect();
    let rec = |row, printed, generators, groups, galois, invariants, params: &[&'static str]| CanonicalFormRecord {
        row,
        printed,
        generators,
        groups,
        galois,
        invariants,
        params: params.to_vec(),
        note: None,
    };
    let mut rows = vec![
        rec(1, "0", vec![], vec![], "{1}", all, &[]),
        rec(
            2,
            "f(t)(ξ1η1 + (p/q)ξ2η2)",
            vec![x1y1.clone(), x2y2.clone()],
            vec![group(&["f"], &[0]), group(&["f", "p/q"], &[1])],
            "ℂ*",
            vec![x1y1.clone(), x2y2.clone()],
            &["f", "p/q"],
        ),
        rec(
            3,
            "f(t)(ξ1η1 + ξ2η2)",
            vec![x1y1.clone(), x2y2.clone()],
            vec![group(&["f"], &[0, 1])],
            "ℂ*",
            vec![x1y1.clone(), x2y2.clone(), quad(&[(XI1, ETA2, 1, 1), (XI2, ETA1, -1, 1)])],
            &["f"],
        ),
        rec(
            4,
            "f(t)ξ1η1",
            vec![x1y1.clone()],
            vec![group(&["f"], &[0])],
            "ℂ*",
            vec![x1y1.clone(), x2sq.clone(), y2sq.clone(), x2y2.clone()],
            &["f"],
        ),
        rec(
            5,
            "f(t)η1²/2",
            vec![y1sq_half.clone()],
            vec![group(&["f"], &[0])],
            "ℂ",
            vec![y1sq.clone(), x2sq.clone(), x2y2.clone(), y2sq.clone()],
            &["f"],
        ),
        rec(
            6,
            "f(t)(η1² + η2²)/2",
            vec![y1sq_half.clone(), y2sq_half.clone()],
            vec![group(&["f"], &[0, 1])],
            "ℂ",
            vec![y1sq.clone(), y2sq.clone()],
            &["f"],
        ),
        rec(
            7,
            "f(t)(ξ2η1 + λη1² + η2²/2)",
            vec![x2y1.clone(), y1sq.clone(), y2sq_half.clone()],
            vec![group(&["f"], &[0, 2]), group(&["f", "λ"], &[1])],
            "ℂ",
            vec![chain.clone(), y1sq.clone()],
            &["f", "λ"],
        ),
        rec(
            8,
            "f(t)ξ1η1 + g(t)ξ2η2",
            vec![x1y1.clone(), x2y2.clone()],
            vec![group(&["f"], &[0]), group(&["g"], &[1])],
            "(ℂ*)²",
            vec![x1y1.clone(), x2y2.clone()],
            &["f", "g"],
        ),
        rec(
            9,
            "f(t)η1²/2 + g(t)ξ2η2",
            vec![y1sq_half.clone(), x2y2.clone()],
            vec![group(&["f"], &[0]), group(&["g"], &[1])],
            "ℂ×ℂ*",
            vec![y1sq.clone(), x2y2.clone()],
            &["f", "g"],
        ),
        rec(
            10,
            "f(t)η1²/2 + g(t)η2²",
            vec![y1sq_half.clone(), y2sq.clone()],
            vec![group(&["f"], &[0]), group(&["g"], &[1])],
            "ℂ²",
            vec![y1sq.clone(), y2sq.clone()],
            &["f", "g"],
        ),
        rec(
            11,
            "f(t)η1(ξ2 + g(t)η1 + η2²/2)",
            vec![x2y1, y2sq_half, y1sq.clone()],
            vec![group(&["f"], &[0, 1]), group(&["f", "g"], &[2])],
            "ℂ²",
            vec![chain, y1sq],
            &["f", "g"],
        ),
    ];
    rows[10].note = Some(
        "the printed form is cubic in (ξ, η); it is read as the quadratic f(t)(ξ2η1 + g(t)η1² + η2²/2), \
         the time-dependent analogue of row 7",
    );
    rows
}

pub fn catalog_row(row: usize) -> Option<CanonicalFormRecord> {
    catalog_rows().into_iter().find(|r| r.row == row)
}

/// Table row of an abelian class; `None` stands for the zero algebra.
pub fn row_for_class(class: Option<AbelianClassId>) -> usize {
    use AbelianClassId::*;
    match class {
        None => 1,
        Some(C1a) => 2,
        Some(C1b) => 3,
        Some(C1c) => 4,
        Some(C2a) => 5,
        Some(C2b) => 6,
        Some(C2c) => 7,
        Some(C3) => 8,
        Some(C4) => 9,
        Some(C5a) => 10,
        Some(C5b) => 11,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub row: usize,
    /// Number of vanishing brackets checked (invariant × group, plus the
    /// symbolic normal form).
    pub brackets_checked: usize,
    /// An involutive, functionally independent pair of invariants.
    pub involutive_pair: (usize, usize),
    /// Pairs of listed invariants that do not Poisson-commute.
    pub non_involutive: Vec<(usize, usize)>,
    /// Rank of the invariants' gradients at a random rational point.
    pub gradient_rank: usize,
}

/// Checks that each invariant commutes with every coefficient group and with
/// the symbolic normal form, and finds an involutive independent pair.
pub fn verify_row(r: &CanonicalFormRecord, seed: u64) -> Result<RowReport> {
    let fail = |msg: String| Error::VerificationFailure(format!("row {}: {msg}", r.row));
    let symbolic = r.symbolic_form();
    let mut checked = 0;
    for (i, f) in r.invariants.iter().enumerate() {
        for g in 0..r.groups.len() {
            let b = poisson_bracket(f, &r.group_sum(g))?;
            if !b.is_zero() {
                return Err(fail(format!(
                    "{{{}, {}}} = {}",
                    f.to_poly_string("ξ", "η"),
                    r.group_sum(g).to_poly_string("ξ", "η"),
                    b.to_poly_string("ξ", "η")
                )));
            }
            checked += 1;
        }
        let b = poisson_bracket(&f.map(|c| ParamPoly::constant(c.clone())), &symbolic)?;
        if !b.is_zero() {
            return Err(fail(format!("invariant {i} does not commute with the normal form: {b}")));
        }
        checked += 1;
    }
    let mut non_involutive = Vec::new();
    let mut pair = None;
    for i in 0..r.invariants.len() {
        for j in i + 1..r.invariants.len() {
            let (a, b) = (&r.invariants[i], &r.invariants[j]);
            if !poisson_bracket(a, b)?.is_zero() {
                non_involutive.push((i, j));
            } else if pair.is_none() && functionally_independent(&[a.clone(), b.clone()], seed) {
                pair = Some((i, j));
            }
        }
    }
    let involutive_pair = pair.ok_or_else(|| fail("no involutive independent pair of invariants".into()))?;
    Ok(RowReport { row: r.row, brackets_checked: checked, involutive_pair, non_involutive, gradient_rank: gradient_rank(&r.invariants, seed) })
}

fn gradient_rank(forms: &[QuadraticHamiltonian<Q>], seed: u64) -> usize {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<Q> = (0..4).map(|_| Q::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
    let rows: Vec<Vec<Q>> = forms.iter().map(|f| f.gradient(&z)).collect();
    if rows.is_empty() {
        0
    } else {
        Mat::from_rows(rows).rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalMatch {
    pub row: usize,
    pub parameters: BTreeMap<String, RatFunc>,
}

fn flatten_rf(m: &Mat<RatFunc>) -> Vec<RatFunc> {
    m.entries().to_vec()
}

/// Writes a conjugated motion matrix `M̄(t)` in the pattern of the row of
/// `class` and reads off the parameters.
pub fn match_canonical(m: &Mat<RatFunc>, class: Option<&AbelianClass>) -> Result<CanonicalMatch> {
    let row = row_for_class(class.map(|c| c.class));
    let rec = catalog_row(row).expect("rows 1..=11 exist");
    if rec.generators.is_empty() {
        if !m.is_zero() {
            return Err(Error::NoMatch("nonzero system matched against the zero row".into()));
        }
        return Ok(CanonicalMatch { row, parameters: BTreeMap::new() });
    }
    let vectors: Vec<Vec<RatFunc>> = rec.generators.iter().map(|k| flatten_rf(&ham_to_matrix(&k.to_ratfunc()))).collect();
    let coeffs = Mat::solve_combination(&vectors, &flatten_rf(m))
        .ok_or_else(|| Error::NoMatch(format!("system is not in the span of the row {row} generators")))?;
    let mut known: BTreeMap<String, RatFunc> = BTreeMap::new();
    for g in &rec.groups {
        let v = coeffs[g.members[0]].clone();
        if g.members.iter().any(|&k| coeffs[k] != v) {
            return Err(Error::NoMatch(format!("row {row}: grouped generators carry different coefficients")));
        }
        let mut prod = RatFunc::one();
        let mut unknown = None;
        for s in &g.symbols {
            match known.get(*s) {
                Some(x) => prod = &prod * x,
                None => unknown = Some(*s),
            }
        }
        let s = unknown.expect("each group introduces one parameter");
        let value = v
            .checked_div(&prod)
            .map_err(|_| Error::NoMatch(format!("row {row}: leading coefficient vanishes")))?;
        if CONSTANT_SYMBOLS.contains(&s) && !value.is_constant() {
            return Err(Error::NonConstantRatio(format!("row {row}: {s} = {value} depends on t")));
        }
        known.insert(s.to_string(), value);
    }
    if known.get("f").is_some_and(RatFunc::is_zero) {
        return Err(Error::NoMatch(format!("row {row}: f vanishes")));
    }
    Ok(CanonicalMatch { row, parameters: known })
}

/// Witness that a quadratic Hamiltonian with two degrees of freedom is
/// integrable: two commuting quadratic first integrals, independent with `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityCertificate {
    pub abelian: bool,
    pub algebra_dim: usize,
    pub class: Option<AbelianClass>,
    pub row: Option<usize>,
    /// Constant frame `ξ = B·z` taking the system to its normal form.
    pub conjugator: Option<FrameChange>,
    pub parameters: BTreeMap<String, RatFunc>,
    /// First integrals in the coordinates of the analysed system.
    pub first_integrals: Vec<QuadraticHamiltonian<Q>>,
    /// When a frame was supplied: the first integrals in the original
    /// coordinates, `F(z, t) = F̄(B(t)z)`.
    pub time_dependent_integrals: Option<Vec<QuadraticHamiltonian<RatFunc>>>,
    /// Non-commuting pair in the coefficient algebra.
    pub witness: Option<(Mat<Q>, Mat<Q>)>,
    pub log: Vec<String>,
}

impl IntegrabilityCertificate {
    pub fn is_certified(&self) -> bool {
        self.abelian && self.first_integrals.len() == 2
    }
}

fn lift(m: &Mat<Q>) -> Mat<RatFunc> {
    m.map(|c| RatFunc::constant(c.clone()))
}

/// `dF/dt = ∂F/∂t + {F, H}` along the flow of `H`.
fn total_derivative(f: &QuadraticHamiltonian<RatFunc>, h: &QuadraticHamiltonian<RatFunc>) -> Result<QuadraticHamiltonian<RatFunc>> {
    let partial_t = QuadraticHamiltonian::from_hessian(&f.hessian().derivative())?;
    Ok(&poisson_bracket(f, h)? + &partial_t)
}

/// Exact check of the three clauses; failures are internal errors.
pub fn verify_clauses(
    h: &QuadraticHamiltonian<RatFunc>,
    fs: &[QuadraticHamiltonian<RatFunc>],
    seed: u64,
) -> Result<Vec<String>> {
    if fs.len() != 2 {
        return Err(Error::InvariantViolation(format!("expected two first integrals, got {}", fs.len())));
    }
    let mut log = Vec::new();
    if !poisson_bracket(&fs[0], &fs[1])?.is_zero() {
        return Err(Error::InvariantViolation("first integrals are not in involution".into()));
    }
    log.push("involution {F1, F2} = 0: exact-pass".to_string());
    for (i, f) in fs.iter().enumerate() {
        let d = total_derivative(f, h)?;
        if !d.is_zero() {
            return Err(Error::InvariantViolation(format!("F{} is not conserved: dF/dt = {d}", i + 1)));
        }
    }
    log.push("conservation X_H F_i = 0: exact-pass".to_string());
    if !independent_with_t(fs, seed) {
        return Err(Error::InvariantViolation("first integrals are functionally dependent".into()));
    }
    log.push("independence of F1, F2, t: exact-pass".to_string());
    Ok(log)
}

/// `t` is a coordinate of its own, so independence with `t` is independence
/// of the forms at a frozen generic time.
fn independent_with_t(fs: &[QuadraticHamiltonian<RatFunc>], seed: u64) -> bool {
    for k in 0..8 {
        let t0 = Q::from_ratio(seed as i64 % 97 + 3 + 7 * k, 11);
        let frozen: Option<Vec<QuadraticHamiltonian<Q>>> = fs
            .iter()
            .map(|f| {
                let s = f.hessian();
                let vals: Option<Vec<Q>> = s.entries().iter().map(|e| e.eval_exact(&t0)).collect();
                vals.map(|v| {
                    QuadraticHamiltonian::from_hessian(&Mat::from_fn(4, 4, |i, j| v[4 * i + j].clone()))
                        .expect("symmetric")
                })
            })
            .collect();
        if let Some(frozen) = frozen {
            if functionally_independent(&frozen, seed) {
                return true;
            }
        }
    }
    false
}

fn is_fallback_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnlistedAbelianAlgebra(_)
            | Error::NonSquareNormalization(_)
            | Error::DimensionTooLarge(_)
            | Error::IrrationalEigenvalueRatio(_)
    )
}

/// Motion matrix, coefficient algebra, classification, row match, first
/// integrals, and an exact check of the certificate clauses.
pub fn integrability_certificate(h: &QuadraticHamiltonian<RatFunc>, seed: u64) -> Result<IntegrabilityCertificate> {
    if h.n() != 2 {
        return Err(Error::UnsupportedDimension(h.n()));
    }
    let m = motion_matrix(h);
    let b = coefficient_algebra(&m)?;
    let mut cert = IntegrabilityCertificate {
        abelian: true,
        algebra_dim: b.dim(),
        class: None,
        row: None,
        conjugator: None,
        parameters: BTreeMap::new(),
        first_integrals: Vec::new(),
        time_dependent_integrals: None,
        witness: None,
        log: vec![format!("coefficient algebra of dimension {}", b.dim())],
    };
    if !is_abelian(&b) {
        cert.abelian = false;
        cert.witness = non_commuting_pair(&b);
        cert.log.push("coefficient algebra is not abelian: no certificate found".into());
        return Ok(cert);
    }
    if b.dim() == 0 {
        cert.row = Some(1);
        cert.conjugator = Some(FrameChange::identity(2));
        cert.first_integrals = first_integrals_from_abelian(&b)?;
    } else {
        match classify_abelian(&b) {
            Ok(class) => {
                let t = &class.conjugator;
                let t_inv = t.inverse().expect("symplectic conjugator");
                let m_bar = &(&lift(&t_inv) * &m) * &lift(t);
                let matched = match_canonical(&m_bar, Some(&class))?;
                let canon = LieBasis::span(2, &class.algebra())?;
                let fbar = first_integrals_from_abelian(&canon)?;
                cert.first_integrals = fbar.iter().map(|f| normalize_form(&f.pullback(&t_inv))).collect();
                cert.log.push(format!("class {} → row {}", class.class, matched.row));
                cert.row = Some(matched.row);
                cert.parameters = matched.parameters;
                cert.conjugator = Some(FrameChange::constant(&t_inv)?);
                cert.class = Some(class);
            }
            Err(e) if is_fallback_error(&e) => {
                cert.log.push(format!("abelian algebra outside the listed normal forms: {e}"));
                let fs = first_integrals_from_abelian(&b)?;
                cert.first_integrals = independent_pair(&fs, seed).ok_or_else(|| {
                    Error::InvariantViolation("abelian algebra without an independent pair".into())
                })?;
            }
            Err(e) => return Err(e),
        }
    }
    let fs: Vec<QuadraticHamiltonian<RatFunc>> = cert.first_integrals.iter().map(|f| f.to_ratfunc()).collect();
    cert.log.extend(verify_clauses(h, &fs, seed)?);
    Ok(cert)
}

fn independent_pair(fs: &[QuadraticHamiltonian<Q>], seed: u64) -> Option<Vec<QuadraticHamiltonian<Q>>> {
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let pair = vec![fs[i].clone(), fs[j].clone()];
            if functionally_independent(&pair, seed) {
                return Some(pair);
            }
        }
    }
    None
}

/// Certificate for the system transported by a user-supplied frame `B(t)`;
/// the first integrals are also returned in the original coordinates.
pub fn certificate_with_frame(
    h: &QuadraticHamiltonian<RatFunc>,
    frame: &FrameChange,
    seed: u64,
) -> Result<IntegrabilityCertificate> {
    let h_bar = transform_hamiltonian(h, frame)?;
    let mut cert = integrability_certificate(&h_bar, seed)?;
    cert.log.insert(0, "system transported by the supplied frame".into());
    if cert.is_certified() {
        let b = frame.matrix();
        let original: Vec<QuadraticHamiltonian<RatFunc>> =
            cert.first_integrals.iter().map(|f| f.to_ratfunc().pullback(b)).collect();
        let log = verify_clauses(h, &original, seed)?;
        cert.log.extend(log.into_iter().map(|l| format!("original coordinates: {l}")));
        cert.time_dependent_integrals = Some(original);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn every_row_verifies() {
        let rows = catalog_rows();
        assert_eq!(rows.len(), 11);
        for r in &rows {
            verify_row(r, 3).unwrap_or_else(|e| panic!("row {}: {e}", r.row));
        }
    }

    #[test]
    fn row_examples() {
        let r2 = catalog_row(2).unwrap();
        assert_eq!(r2.galois, "ℂ*");
        assert_eq!(r2.invariants, r2.generators);
        let r1 = catalog_row(1).unwrap();
        assert_eq!(r1.invariants.len(), 10);
        let r9 = catalog_row(9).unwrap();
        assert_eq!(r9.galois, "ℂ×ℂ*");
        assert!(catalog_row(11).unwrap().note.is_some());
    }

    #[test]
    fn row_seven_needs_its_grouping() {
        let r = catalog_row(7).unwrap();
        let inv = &r.invariants[0];
        assert!(poisson_bracket(inv, &r.group_sum(0)).unwrap().is_zero());
        let alone = poisson_bracket(inv, &r.generators[0]).unwrap();
        assert_eq!(alone, quad(&[(ETA1, ETA2, -2, 1)]));
    }

    #[test]
    fn matching_examples() {
        let m = Mat::diag(vec![rf("1/t"), rf("0"), rf("-1/t"), rf("0")]);
        let c = classify_abelian(&coefficient_algebra(&m).unwrap()).unwrap();
        let got = match_canonical(&m, Some(&c)).unwrap();
        assert_eq!(got.row, 4);
        assert_eq!(got.parameters["f"], rf("1/t"));

        let f = rf("t^2+1");
        let half = &f * &rf("1/2");
        let m = Mat::diag(vec![f.clone(), half.clone(), -f.clone(), -half]);
        let class = AbelianClass { class: AbelianClassId::C1a, pq: Some((1, 2)), k: None, conjugator: Mat::identity(4) };
        let got = match_canonical(&m, Some(&class)).unwrap();
        assert_eq!(got.row, 2);
        assert_eq!(got.parameters["p/q"], rf("1/2"));

        assert_eq!(match_canonical(&Mat::zeros(4, 4), None).unwrap().row, 1);
        let m = Mat::diag(vec![rf("1"), rf("t"), rf("-1"), rf("-t")]);
        assert!(matches!(match_canonical(&m, Some(&class)), Err(Error::NonConstantRatio(_))));
    }

    #[test]
    fn certificate_examples() {
        let h = QuadraticHamiltonian::from_monomials(
            2,
            &[((XI1, ETA1), rf("1/t")), ((XI2, ETA2), rf("2/t"))].into_iter().collect(),
        );
        let c = integrability_certificate(&h, 0).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.row, Some(2));
        assert_eq!(c.class.as_ref().unwrap().pq, Some((1, 2)));
        assert_eq!(c.first_integrals, vec![quad(&[(XI1, ETA1, 1, 1)]), quad(&[(XI2, ETA2, 1, 1)])]);

        let c = integrability_certificate(&QuadraticHamiltonian::zero(2), 0).unwrap();
        assert_eq!(c.row, Some(1));
        assert!(c.is_certified());

        let h = QuadraticHamiltonian::from_monomials(
            2,
            &[((XI1, XI1), rf("t/2")), ((ETA1, ETA1), rf("1/(2*t)"))].into_iter().collect(),
        );
        let c = integrability_certificate(&h, 0).unwrap();
        assert!(!c.abelian && !c.is_certified());
        assert!(c.witness.is_some());
    }

    #[test]
    fn certificate_through_a_frame() {
        let h = catalog_row(9)
            .unwrap()
            .instantiate(&[("f".to_string(), rf("t")), ("g".to_string(), rf("1/(t+1)"))].into_iter().collect())
            .unwrap();
        let frame = crate::frames::random_symplectic_frame(4, 2, 3);
        // H' is the system whose transport by the frame is H
        let h_orig = transform_hamiltonian(&h, &frame.inverse()).unwrap();
        let c = certificate_with_frame(&h_orig, &frame, 1).unwrap();
        assert_eq!(c.row, Some(9));
        assert_eq!(c.time_dependent_integrals.as_ref().map(Vec::len), Some(2));
    }

    #[test]
    fn unlisted_algebras_fall_back() {
        // y1² and y1·y2 with independent coefficients
        let h = QuadraticHamiltonian::from_monomials(
            2,
            &[((ETA1, ETA1), rf("t")), ((ETA1, ETA2), rf("1/t"))].into_iter().collect(),
        );
        let c = integrability_certificate(&h, 0).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.row, None);
    }
}
