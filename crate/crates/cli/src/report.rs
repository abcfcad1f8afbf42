//! Report types. Struct field order fixes the JSON key order; maps are sorted.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, EXIT_INPUT, EXIT_INTERNAL, EXIT_NO_CERTIFICATE, EXIT_OK};
use crate::spec::{Echo, SCHEMA};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: &str, ok: bool) -> Self {
        Check { name: name.into(), status: if ok { "exact-pass" } else { "exact-fail" }, detail: None }
    }

    pub fn numeric(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            status: if value < tolerance { "numeric-pass" } else { "numeric-fail" },
            detail: Some(format!("{value:.3e} (tolerance {tolerance:.1e})")),
        }
    }

    pub fn skipped(name: &str, why: String) -> Self {
        Check { name: name.into(), status: "skipped", detail: Some(why) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub abelian: bool,
    pub certified: bool,
    pub algebra_dim: usize,
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pq: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transformed_integrals: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Vec<Vec<String>>; 2]>,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralDrift {
    pub integral: String,
    pub drift: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
    pub method: &'static str,
    pub step: f64,
    pub symplectic_drift: f64,
    pub integral_drifts: Vec<IntegralDrift>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commuting_square: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub inputs: Vec<String>,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub echo: Vec<Echo>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_integrals: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn status_name(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_NO_CERTIFICATE => "no-certificate",
        EXIT_INPUT => "input-error",
        _ => "internal-error",
    }
}

impl Entry {
    pub fn new(inputs: Vec<String>) -> Self {
        Entry {
            inputs,
            status: status_name(EXIT_OK),
            exit_code: EXIT_OK,
            error: None,
            echo: Vec::new(),
            checks: Vec::new(),
            certificate: None,
            row: None,
            parameters: None,
            first_integrals: None,
            numeric: None,
            details: None,
            timing_ms: None,
        }
    }

    pub fn raise(&mut self, code: i32) {
        self.exit_code = self.exit_code.max(code);
        self.status = status_name(self.exit_code);
    }

    pub fn fail(&mut self, e: &CliError) {
        self.raise(e.exit_code());
        self.error = Some(e.to_string());
    }

    /// Any exact check that failed is an internal invariant violation.
    pub fn settle_checks(&mut self) {
        if self.checks.iter().any(|c| c.status == "exact-fail") {
            self.raise(EXIT_INTERNAL);
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub no_certificate: usize,
    pub input_error: usize,
    pub internal_error: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub results: Vec<Entry>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, tolerance: f64, results: Vec<Entry>) -> Self {
        let mut summary = Summary { total: results.len(), ..Summary::default() };
        for e in &results {
            match e.exit_code {
                EXIT_OK => summary.ok += 1,
                EXIT_NO_CERTIFICATE => summary.no_certificate += 1,
                EXIT_INPUT => summary.input_error += 1,
                _ => summary.internal_error += 1,
            }
        }
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            tolerance,
            results,
            summary,
            timing_ms: None,
        }
    }

    /// Worst exit code over all entries.
    pub fn exit_code(&self) -> i32 {
        self.results.iter().map(|e| e.exit_code).max().unwrap_or(EXIT_OK)
    }
}
