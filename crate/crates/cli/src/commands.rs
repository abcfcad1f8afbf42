//! Command dispatch over parsed system files.

use std::path::PathBuf;
use std::time::Instant;

use clap::Subcommand;
use linham_core::catalog::{
    catalog_rows, certificate_with_frame, integrability_certificate, match_canonical, verify_row,
    IntegrabilityCertificate,
};
use linham_core::frames::{transform_hamiltonian, transform_hamiltonian_scalar, transform_system};
use linham_core::liealg::{classify_abelian, coefficient_algebra, is_abelian, non_commuting_pair};
use linham_core::numint::{
    eval_matrix, integrate_fundamental, invariant_drift, invariant_drift_timed, max_entry_diff, symplectic_drift,
};
use linham_core::symplectic::{
    is_hamiltonian_matrix, matrix_to_ham, motion_matrix, poisson_bracket, QuadraticHamiltonian,
};
use linham_core::{Error, GaussianRational, Mat, RatFunc};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_NO_CERTIFICATE};
use crate::report::{CertificateReport, Check, Entry, IntegralDrift, NumericReport, Report};
use crate::spec::{matrix_strings, parse_spec, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Symmetry of A, B and membership of the motion matrix in sp(2n)
    Check,
    /// Poisson bracket of exactly two systems
    Bracket,
    /// Transport a system through its frame
    Transform,
    /// Coefficient algebra and abelian class (or a non-commuting witness)
    Classify,
    /// Conjugator and canonical row match
    Canonicalize,
    /// Verify all rows of the canonical catalog
    Catalog,
    /// Integrate the fundamental matrix and report drifts
    Integrate,
    /// End-to-end integrability certificate
    Certify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Bracket => "bracket",
            Command::Transform => "transform",
            Command::Classify => "classify",
            Command::Canonicalize => "canonicalize",
            Command::Catalog => "catalog",
            Command::Integrate => "integrate",
            Command::Certify => "certify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub inputs: Vec<PathBuf>,
    pub seed: u64,
    pub jobs: usize,
    pub tolerance: f64,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { inputs: Vec::new(), seed: 0, jobs: 0, tolerance: 1e-8, timing: true }
    }
}

type Q = GaussianRational;

fn lift(m: &Mat<Q>) -> Mat<RatFunc> {
    m.map(|c| RatFunc::constant(c.clone()))
}

fn strings<S: std::fmt::Display>(xs: &[S]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn core(context: &str) -> impl FnOnce(Error) -> CliError + '_ {
    move |e| CliError::core(context, e)
}

fn check(spec: &SystemSpec, entry: &mut Entry) -> Result<(), CliError> {
    let m = motion_matrix(&spec.hamiltonian);
    entry.checks.push(Check::exact("blocks A and B symmetric", true));
    entry.checks.push(Check::exact("motion matrix in sp(2n)", is_hamiltonian_matrix(&m).map_err(core("check"))?));
    if spec.frame.is_some() {
        entry.checks.push(Check::exact("frame symplectic", true));
    }
    entry.details = Some(json!({
        "hamiltonian": spec.hamiltonian.to_string(),
        "motion_matrix": matrix_strings(&m),
    }));
    Ok(())
}

fn transform(spec: &SystemSpec, entry: &mut Entry) -> Result<(), CliError> {
    let frame = spec.frame.as_ref().ok_or_else(|| CliError::Usage("transform needs a \"frame\" in the input".into()))?;
    let h = &spec.hamiltonian;
    let hb = transform_hamiltonian(h, frame).map_err(core("transform"))?;
    let scalar = transform_hamiltonian_scalar(h, frame).map_err(core("transform"))?;
    let mbar = transform_system(&motion_matrix(h), frame).map_err(core("transform"))?;
    entry.checks.push(Check::exact("matrix and scalar transports agree", hb == scalar));
    entry.checks.push(Check::exact("gauge identity", motion_matrix(&hb) == mbar));
    entry.details = Some(json!({
        "hamiltonian": h.to_string(),
        "transformed_hamiltonian": hb.to_string(),
        "transformed_motion_matrix": matrix_strings(&mbar),
        "gauge": matrix_strings(&frame.gauge()),
    }));
    Ok(())
}

fn algebra_details(basis: &[Mat<Q>]) -> Value {
    json!(basis.iter().map(matrix_strings).collect::<Vec<_>>())
}

fn classify(spec: &SystemSpec, entry: &mut Entry) -> Result<(), CliError> {
    let m = motion_matrix(&spec.hamiltonian);
    let b = coefficient_algebra(&m).map_err(core("coefficient algebra"))?;
    let mut details = json!({
        "algebra_dim": b.dim(),
        "basis": algebra_details(&b.elements()),
        "abelian": is_abelian(&b),
    });
    if !is_abelian(&b) {
        let (x, y) = non_commuting_pair(&b).expect("a non-abelian algebra has a non-commuting pair");
        details["witness"] = json!([matrix_strings(&x), matrix_strings(&y)]);
    } else if b.dim() == 0 {
        details["class"] = Value::Null;
    } else {
        let class = classify_abelian(&b).map_err(core("classification"))?;
        details["class"] = json!(class.class.label());
        if let Some(pq) = class.pq {
            details["pq"] = json!(pq);
        }
        if let Some(k) = &class.k {
            details["k"] = json!(k.to_string());
        }
        details["conjugator"] = json!(matrix_strings(&class.conjugator));
        details["canonical_algebra"] = algebra_details(&class.algebra());
    }
    entry.details = Some(details);
    Ok(())
}

fn canonicalize(spec: &SystemSpec, entry: &mut Entry) -> Result<(), CliError> {
    let m = motion_matrix(&spec.hamiltonian);
    let b = coefficient_algebra(&m).map_err(core("coefficient algebra"))?;
    if !is_abelian(&b) {
        return Err(CliError::core("canonicalize", Error::NotAbelian));
    }
    let (class, t) = if b.dim() == 0 {
        (None, Mat::<Q>::identity(m.rows()))
    } else {
        let c = classify_abelian(&b).map_err(core("classification"))?;
        let t = c.conjugator.clone();
        (Some(c), t)
    };
    let t_inv = t.inverse().expect("symplectic conjugators are invertible");
    let m_bar = &(&lift(&t_inv) * &m) * &lift(&t);
    let matched = match_canonical(&m_bar, class.as_ref()).map_err(core("canonical match"))?;
    let canonical = matrix_to_ham(&m_bar).map_err(core("canonical form"))?;
    entry.row = Some(matched.row);
    entry.parameters = Some(matched.parameters.iter().map(|(k, v)| (k.clone(), v.to_string())).collect());
    entry.checks.push(Check::exact("canonical form matches the row generators", true));
    entry.details = Some(json!({
        "class": class.as_ref().map(|c| c.class.label()),
        "conjugator": matrix_strings(&t),
        "canonical_hamiltonian": canonical.to_string(),
    }));
    Ok(())
}

enum Integrals {
    Constant(Vec<QuadraticHamiltonian<Q>>),
    Timed(Vec<QuadraticHamiltonian<RatFunc>>),
}

fn certificate_integrals(cert: &IntegrabilityCertificate) -> Option<Integrals> {
    if !cert.is_certified() {
        return None;
    }
    Some(match &cert.time_dependent_integrals {
        Some(fs) => Integrals::Timed(fs.clone()),
        None => Integrals::Constant(cert.first_integrals.clone()),
    })
}

fn run_certificate(spec: &SystemSpec, seed: u64) -> Result<IntegrabilityCertificate, CliError> {
    match &spec.frame {
        Some(f) => certificate_with_frame(&spec.hamiltonian, f, seed),
        None => integrability_certificate(&spec.hamiltonian, seed),
    }
    .map_err(core("certificate"))
}

fn numeric(spec: &SystemSpec, integrals: Option<&Integrals>, tol: f64, entry: &mut Entry) -> Result<(), CliError> {
    let num = spec.numeric.as_ref().ok_or_else(|| CliError::Usage("input has no \"numeric\" section".into()))?;
    let m = motion_matrix(&spec.hamiltonian);
    let tr = integrate_fundamental(&m, num.t0, num.t1, num.steps).map_err(core("integration"))?;
    let sym = symplectic_drift(&tr);
    entry.checks.push(Check::numeric("symplectic drift", sym, tol));
    let mut drifts = Vec::new();
    match integrals {
        Some(Integrals::Constant(fs)) => {
            for f in fs {
                let d = invariant_drift(f, &tr, &num.z0).map_err(core("drift"))?;
                drifts.push(IntegralDrift { integral: f.to_string(), drift: d });
            }
        }
        Some(Integrals::Timed(fs)) => {
            for f in fs {
                let d = invariant_drift_timed(f, &tr, &num.z0).map_err(core("drift"))?;
                drifts.push(IntegralDrift { integral: f.to_string(), drift: d });
            }
        }
        None => entry.checks.push(Check::skipped("first-integral drift", "no certificate".into())),
    }
    for d in &drifts {
        entry.checks.push(Check::numeric(&format!("drift of {}", d.integral), d.drift, tol));
    }
    let mut square = None;
    if let Some(frame) = &spec.frame {
        let attempt = transform_system(&m, frame).and_then(|mbar| {
            let trb = integrate_fundamental(&mbar, num.t0, num.t1, num.steps)?;
            let lhs = eval_matrix(frame.matrix(), num.t1)? * tr.final_matrix();
            let rhs = trb.final_matrix() * eval_matrix(frame.matrix(), num.t0)?;
            let scale = lhs.iter().map(|x| x.norm()).fold(1.0, f64::max);
            Ok(max_entry_diff(&lhs, &rhs) / scale)
        });
        match attempt {
            Ok(d) => {
                entry.checks.push(Check::numeric("commuting square", d, tol.max(1e-7)));
                square = Some(d);
            }
            Err(e) => entry.checks.push(Check::skipped("commuting square", e.to_string())),
        }
    }
    entry.numeric = Some(NumericReport {
        t0: num.t0,
        t1: num.t1,
        steps: num.steps,
        method: tr.method.name(),
        step: tr.step,
        symplectic_drift: sym,
        integral_drifts: drifts,
        commuting_square: square,
    });
    let failed: Vec<String> = entry.checks.iter().filter(|c| c.status == "numeric-fail").map(|c| c.name.clone()).collect();
    if !failed.is_empty() {
        return Err(CliError::Numeric(failed.join(", ")));
    }
    Ok(())
}

fn integrate(spec: &SystemSpec, opts: &Options, entry: &mut Entry) -> Result<(), CliError> {
    if spec.numeric.is_none() {
        return Err(CliError::Usage("integrate needs a \"numeric\" section in the input".into()));
    }
    let integrals = match run_certificate(spec, opts.seed) {
        Ok(cert) => certificate_integrals(&cert),
        Err(_) => None,
    };
    numeric(spec, integrals.as_ref(), opts.tolerance, entry)
}

fn certificate_report(cert: &IntegrabilityCertificate) -> CertificateReport {
    let class = cert.class.as_ref();
    CertificateReport {
        abelian: cert.abelian,
        certified: cert.is_certified(),
        algebra_dim: cert.algebra_dim,
        class: class.map(|c| c.class.label().to_string()),
        pq: class.and_then(|c| c.pq),
        k: class.and_then(|c| c.k.as_ref()).map(ToString::to_string),
        conjugator: cert.conjugator.as_ref().map(|f| matrix_strings(f.matrix())),
        transformed_integrals: cert.time_dependent_integrals.as_ref().map(|_| strings(&cert.first_integrals)),
        witness: cert.witness.as_ref().map(|(x, y)| [matrix_strings(x), matrix_strings(y)]),
        log: cert.log.clone(),
    }
}

fn certify(spec: &SystemSpec, opts: &Options, entry: &mut Entry) -> Result<(), CliError> {
    let cert = run_certificate(spec, opts.seed)?;
    for line in &cert.log {
        if let Some((name, status)) = line.rsplit_once(": ") {
            if status == "exact-pass" {
                entry.checks.push(Check::exact(name, true));
            }
        }
    }
    entry.row = cert.row;
    entry.parameters = Some(cert.parameters.iter().map(|(k, v)| (k.clone(), v.to_string())).collect());
    entry.first_integrals = Some(match &cert.time_dependent_integrals {
        Some(fs) => strings(fs),
        None => strings(&cert.first_integrals),
    });
    entry.certificate = Some(certificate_report(&cert));
    if !cert.is_certified() {
        entry.raise(EXIT_NO_CERTIFICATE);
        entry.error = Some("coefficient algebra is not abelian: no certificate found".into());
        return Ok(());
    }
    if spec.numeric.is_some() {
        numeric(spec, certificate_integrals(&cert).as_ref(), opts.tolerance, entry)?;
    }
    Ok(())
}

fn dispatch(cmd: Command, spec: &SystemSpec, opts: &Options, entry: &mut Entry) -> Result<(), CliError> {
    match cmd {
        Command::Check => check(spec, entry),
        Command::Transform => transform(spec, entry),
        Command::Classify => classify(spec, entry),
        Command::Canonicalize => canonicalize(spec, entry),
        Command::Integrate => integrate(spec, opts, entry),
        Command::Certify => certify(spec, opts, entry),
        Command::Bracket | Command::Catalog => unreachable!("handled before dispatch"),
    }
}

fn finish(mut entry: Entry, start: Instant, opts: &Options) -> Entry {
    entry.settle_checks();
    if opts.timing {
        entry.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    entry
}

fn single(cmd: Command, path: &PathBuf, opts: &Options) -> Entry {
    let start = Instant::now();
    let mut entry = Entry::new(vec![path.display().to_string()]);
    match parse_spec(path) {
        Ok(spec) => {
            entry.echo.push(spec.echo());
            if let Err(e) = dispatch(cmd, &spec, opts, &mut entry) {
                entry.fail(&e);
            }
        }
        Err(e) => entry.fail(&e),
    }
    finish(entry, start, opts)
}

fn bracket(opts: &Options) -> Entry {
    let start = Instant::now();
    let mut entry = Entry::new(opts.inputs.iter().map(|p| p.display().to_string()).collect());
    let result = (|| {
        if opts.inputs.len() != 2 {
            return Err(CliError::Usage(format!("bracket takes exactly two inputs, got {}", opts.inputs.len())));
        }
        let f = parse_spec(&opts.inputs[0])?;
        let g = parse_spec(&opts.inputs[1])?;
        entry.echo = vec![f.echo(), g.echo()];
        // poisson_bracket compares the partial-derivative and commutator routes
        let b = poisson_bracket(&f.hamiltonian, &g.hamiltonian).map_err(core("bracket"))?;
        entry.checks.push(Check::exact("bracket routes agree", true));
        entry.details = Some(json!({ "bracket": b.to_string(), "involutive": b.is_zero() }));
        Ok(())
    })();
    if let Err(e) = result {
        entry.fail(&e);
    }
    finish(entry, start, opts)
}

fn catalog(opts: &Options) -> Entry {
    let start = Instant::now();
    let mut entry = Entry::new(Vec::new());
    let mut rows = Vec::new();
    let mut verified = 0;
    for rec in catalog_rows() {
        let name = format!("row {}", rec.row);
        match verify_row(&rec, opts.seed) {
            Ok(rep) => {
                verified += 1;
                entry.checks.push(Check::exact(&name, true));
                let (i, j) = rep.involutive_pair;
                rows.push(json!({
                    "row": rec.row,
                    "normal_form": rec.printed,
                    "galois_group": rec.galois,
                    "invariants": strings(&rec.invariants),
                    "brackets_checked": rep.brackets_checked,
                    "involutive_pair": [rec.invariants[i].to_string(), rec.invariants[j].to_string()],
                    "non_involutive": rep.non_involutive,
                    "gradient_rank": rep.gradient_rank,
                    "note": rec.note,
                }));
            }
            Err(e) => {
                let mut c = Check::exact(&name, false);
                c.detail = Some(e.to_string());
                entry.checks.push(c);
                rows.push(json!({ "row": rec.row, "normal_form": rec.printed, "error": e.to_string() }));
            }
        }
    }
    entry.details = Some(json!({ "rows": rows, "verified": format!("{verified}/{}", rows.len()) }));
    finish(entry, start, opts)
}

/// Runs `cmd` over the inputs, in parallel across files when `jobs != 1`.
pub fn run(cmd: Command, opts: &Options) -> Report {
    let start = Instant::now();
    let results = match cmd {
        Command::Catalog => vec![catalog(opts)],
        Command::Bracket => vec![bracket(opts)],
        _ if opts.inputs.is_empty() => {
            let mut e = Entry::new(Vec::new());
            e.fail(&CliError::Usage(format!("{} needs at least one --input", cmd.name())));
            vec![e]
        }
        _ => {
            let work = || opts.inputs.par_iter().map(|p| single(cmd, p, opts)).collect::<Vec<_>>();
            match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build() {
                Ok(pool) => pool.install(work),
                Err(_) => opts.inputs.iter().map(|p| single(cmd, p, opts)).collect(),
            }
        }
    };
    let mut report = Report::new(cmd.name(), opts.seed, opts.tolerance, results);
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec_str;

    fn spec(text: &str) -> SystemSpec {
        parse_spec_str(text, "mem").unwrap()
    }

    fn entry_for(cmd: Command, text: &str) -> Entry {
        let s = spec(text);
        let mut e = Entry::new(vec!["mem".into()]);
        if let Err(err) = dispatch(cmd, &s, &Options::default(), &mut e) {
            e.fail(&err);
        }
        e.settle_checks();
        e
    }

    const DIAGONAL: &str = r#"{"n":2,"C":[["1/t","0"],["0","2/t"]]}"#;

    #[test]
    fn certify_diagonal_example() {
        let e = entry_for(Command::Certify, DIAGONAL);
        assert_eq!(e.exit_code, 0, "{:?}", e.error);
        assert_eq!(e.row, Some(2));
        let cert = e.certificate.unwrap();
        assert_eq!(cert.pq, Some((1, 2)));
        assert_eq!(e.first_integrals.unwrap(), vec!["x1*y1", "x2*y2"]);
        assert_eq!(e.checks.len(), 3);
        assert!(e.checks.iter().all(|c| c.status == "exact-pass"));
    }

    #[test]
    fn certify_non_abelian() {
        let e = entry_for(Command::Certify, r#"{"n":2,"C":[["t","1"],["0","0"]]}"#);
        assert_eq!(e.exit_code, EXIT_NO_CERTIFICATE);
        assert!(e.certificate.unwrap().witness.is_some());
    }

    #[test]
    fn classify_and_canonicalize() {
        let e = entry_for(Command::Classify, DIAGONAL);
        let d = e.details.unwrap();
        assert_eq!(d["class"], "1a");
        assert_eq!(d["pq"], json!([1, 2]));
        let e = entry_for(Command::Canonicalize, DIAGONAL);
        assert_eq!(e.row, Some(2));
        assert_eq!(e.parameters.unwrap()["f"], "1/t");
    }

    #[test]
    fn integrate_reports_drifts() {
        let text = r#"{"n":2,"C":[["1/t","0"],["0","2/t"]],"numeric":{"t0":1,"t1":2,"steps":2000}}"#;
        let e = entry_for(Command::Integrate, text);
        assert_eq!(e.exit_code, 0, "{:?}", e.error);
        let num = e.numeric.unwrap();
        assert_eq!(num.integral_drifts.len(), 2);
        assert!(num.integral_drifts.iter().all(|d| d.drift < 1e-8));
        let e = entry_for(Command::Integrate, DIAGONAL);
        assert_eq!(e.exit_code, 2);
    }

    #[test]
    fn transform_with_frame() {
        let text = r#"{"n":1,"frame":[["t","0"],["0","1/t"]]}"#;
        let e = entry_for(Command::Transform, text);
        assert_eq!(e.exit_code, 0);
        assert_eq!(e.details.unwrap()["transformed_hamiltonian"], "(1/t)*x1*y1");
        assert_eq!(entry_for(Command::Transform, DIAGONAL).exit_code, 2);
    }

    #[test]
    fn catalog_verifies_every_row() {
        let e = catalog(&Options::default());
        assert_eq!(e.exit_code, 0);
        assert_eq!(e.details.unwrap()["verified"], "11/11");
    }
}
