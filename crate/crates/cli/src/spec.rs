//! JSON system descriptions.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "n": 2,
//!   "A": [["0", "0"], ["0", "0"]],
//!   "B": [["0", "0"], ["0", "0"]],
//!   "C": [["1/t", "0"], ["0", "2/t"]],
//!   "frame": null,
//!   "numeric": {"t0": 1, "t1": 2, "steps": 1000, "z0": [1, 0.5, [0, 1], -1]}
//! }
//! ```
//!
//! The Hamiltonian is `½ xᵗAx + ½ yᵗBy + xᵗCy`. Missing blocks are zero.

use std::fs;
use std::path::Path;

use linham_core::frames::FrameChange;
use linham_core::scalars::parse_ratfunc;
use linham_core::symplectic::QuadraticHamiltonian;
use linham_core::{Mat, RatFunc};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

/// A coefficient: a string under the scalar grammar, or a JSON integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Int(i64),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Int(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
enum ComplexEntry {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumeric {
    t0: f64,
    t1: f64,
    steps: usize,
    z0: Option<Vec<ComplexEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    schema: Option<u32>,
    name: Option<String>,
    n: usize,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "B")]
    b: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "C")]
    c: Option<Vec<Vec<Entry>>>,
    frame: Option<Vec<Vec<Entry>>>,
    numeric: Option<RawNumeric>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Numeric {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
    #[serde(serialize_with = "serialize_z0")]
    pub z0: Vec<Complex64>,
}

fn serialize_z0<S: serde::Serializer>(z0: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(z0.len()))?;
    for z in z0 {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub name: Option<String>,
    pub hamiltonian: QuadraticHamiltonian<RatFunc>,
    pub frame: Option<FrameChange>,
    pub numeric: Option<Numeric>,
}

/// Parsed input in canonical printing, echoed into reports.
#[derive(Clone, Debug, Serialize)]
pub struct Echo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<Numeric>,
}

pub fn matrix_strings<S: std::fmt::Display + linham_core::Ring>(m: &Mat<S>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

impl SystemSpec {
    pub fn n(&self) -> usize {
        self.hamiltonian.n()
    }

    pub fn echo(&self) -> Echo {
        Echo {
            name: self.name.clone(),
            n: self.n(),
            a: matrix_strings(self.hamiltonian.a()),
            b: matrix_strings(self.hamiltonian.b()),
            c: matrix_strings(self.hamiltonian.c()),
            frame: self.frame.as_ref().map(|f| matrix_strings(f.matrix())),
            numeric: self.numeric.clone(),
        }
    }
}

fn parse_block(rows: Option<&Vec<Vec<Entry>>>, label: &str, size: usize) -> Result<Mat<RatFunc>, CliError> {
    let Some(rows) = rows else {
        return Ok(Mat::zeros(size, size));
    };
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(CliError::Shape(format!("{label} must be {size}x{size}")));
    }
    let mut out = Mat::zeros(size, size);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let text = e.text();
            let v = parse_ratfunc(&text).map_err(|source| CliError::Coefficient {
                location: format!("{label}[{i}][{j}] = {text:?}"),
                source,
            })?;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Parses and validates a system description from JSON text.
pub fn parse_spec_str(text: &str, origin: &str) -> Result<SystemSpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Json {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(v) = raw.schema {
        if v != SCHEMA {
            return Err(CliError::Shape(format!("unsupported schema version {v}, expected {SCHEMA}")));
        }
    }
    if raw.n == 0 {
        return Err(CliError::Shape("n must be positive".into()));
    }
    let n = raw.n;
    let a = parse_block(raw.a.as_ref(), "A", n)?;
    let b = parse_block(raw.b.as_ref(), "B", n)?;
    let c = parse_block(raw.c.as_ref(), "C", n)?;
    let hamiltonian = QuadraticHamiltonian::new(a, b, c).map_err(|e| CliError::core("hamiltonian", e))?;
    let frame = match &raw.frame {
        Some(rows) => {
            let m = parse_block(Some(rows), "frame", 2 * n)?;
            Some(FrameChange::new(m).map_err(|e| CliError::core("frame", e))?)
        }
        None => None,
    };
    let numeric = match raw.numeric {
        Some(num) => {
            let z0 = match num.z0 {
                Some(z) => z
                    .into_iter()
                    .map(|e| match e {
                        ComplexEntry::Real(re) => Complex64::new(re, 0.0),
                        ComplexEntry::Pair([re, im]) => Complex64::new(re, im),
                    })
                    .collect(),
                None => vec![Complex64::new(1.0, 0.0); 2 * n],
            };
            if z0.len() != 2 * n {
                return Err(CliError::Shape(format!("numeric.z0 must have {} entries", 2 * n)));
            }
            Some(Numeric { t0: num.t0, t1: num.t1, steps: num.steps, z0 })
        }
        None => None,
    };
    Ok(SystemSpec { name: raw.name, hamiltonian, frame, numeric })
}

pub fn parse_spec(path: &Path) -> Result<SystemSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_spec_str(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use linham_core::Error;

    const ZEROS: &str = r#"[["0","0"],["0","0"]]"#;

    fn spec_with_c(c: &str) -> String {
        format!(r#"{{"schema":1,"n":2,"A":{ZEROS},"B":{ZEROS},"C":{c}}}"#)
    }

    #[test]
    fn parses_the_diagonal_example() {
        let s = parse_spec_str(&spec_with_c(r#"[["1/t","0"],["0","2/t"]]"#), "mem").unwrap();
        assert_eq!(s.hamiltonian.to_string(), "(1/t)*x1*y1 + (2/t)*x2*y2");
        assert!(s.frame.is_none() && s.numeric.is_none());
    }

    #[test]
    fn malformed_coefficient() {
        let err = parse_spec_str(&spec_with_c(r#"[["t^","0"],["0","0"]]"#), "mem").unwrap_err();
        assert!(matches!(err, CliError::Coefficient { source: Error::Parse { .. }, .. }), "{err}");
        assert!(err.to_string().contains("C[0][0]"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn ramified_coefficient() {
        let err = parse_spec_str(&spec_with_c(r#"[["t^(1/2)","0"],["0","0"]]"#), "mem").unwrap_err();
        assert!(matches!(err, CliError::Coefficient { source: Error::UnsupportedFunction(_), .. }));
    }

    #[test]
    fn asymmetric_block() {
        let text = r#"{"n":2,"A":[["0","1"],["0","0"]]}"#;
        let err = parse_spec_str(text, "mem").unwrap_err();
        assert!(matches!(err, CliError::Core { source: Error::AsymmetricBlock('A'), .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = parse_spec_str("{\n  \"n\": 2,\n  \"A\": [\n}", "mem").unwrap_err();
        match err {
            CliError::Json { line, column, .. } => assert_eq!((line, column), (4, 1)),
            other => panic!("{other}"),
        }
        assert!(matches!(parse_spec_str(r#"{"n":2,"D":1}"#, "mem"), Err(CliError::Json { .. })));
    }

    #[test]
    fn shapes_and_schema() {
        assert!(matches!(parse_spec_str(r#"{"n":2,"A":[["0"]]}"#, "mem"), Err(CliError::Shape(_))));
        assert!(matches!(parse_spec_str(r#"{"schema":2,"n":1}"#, "mem"), Err(CliError::Shape(_))));
        assert!(matches!(parse_spec_str(r#"{"n":0}"#, "mem"), Err(CliError::Shape(_))));
        let s = parse_spec_str(r#"{"n":1,"C":[[3]]}"#, "mem").unwrap();
        assert_eq!(s.hamiltonian.to_string(), "(3)*x1*y1");
    }

    #[test]
    fn frame_and_numeric() {
        let text = r#"{"n":1,"C":[["1/t"]],
            "frame":[["t","0"],["0","1/t"]],
            "numeric":{"t0":1,"t1":2,"steps":10,"z0":[1,[0,2]]}}"#;
        let s = parse_spec_str(text, "mem").unwrap();
        assert!(s.frame.is_some());
        let num = s.numeric.unwrap();
        assert_eq!(num.z0, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        let bad = r#"{"n":1,"frame":[["t","0"],["0","t"]]}"#;
        assert!(matches!(parse_spec_str(bad, "mem"), Err(CliError::Core { source: Error::NotSymplectic, .. })));
    }
}
