use std::time::Instant;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::rational::round12;

/// Relative tolerance for comparisons involving floating-point quantities.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "≤")]
    Le,
    #[serde(rename = "≥")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "≤",
            Relation::Ge => "≥",
            Relation::Eq => "=",
        }
    }
}

/// One side of a checked relation.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Integer(u128),
    Real(f64),
    /// A positive real given by its natural logarithm.
    Ln(f64),
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        match *self {
            Quantity::Integer(v) => m.serialize_entry("integer", &v)?,
            Quantity::Real(v) => m.serialize_entry("real", &round12(v))?,
            Quantity::Ln(v) => m.serialize_entry("ln", &round12(v))?,
        }
        m.end()
    }
}

impl Quantity {
    pub fn ln(&self) -> f64 {
        match *self {
            Quantity::Integer(v) => (v as f64).ln(),
            Quantity::Real(v) => v.ln(),
            Quantity::Ln(v) => v,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Quantity::Integer(v) => v as f64,
            Quantity::Real(v) => v,
            Quantity::Ln(v) => v.exp(),
        }
    }

    fn cell(&self) -> String {
        match *self {
            Quantity::Integer(v) => v.to_string(),
            Quantity::Real(v) => format!("{}", round12(v)),
            Quantity::Ln(v) => format!("exp({})", round12(v)),
        }
    }
}

/// Integers compare exactly; anything involving a real compares with relative
/// tolerance [`REAL_TOLERANCE`] (absolute in the log domain).
pub fn holds(lhs: Quantity, rel: Relation, rhs: Quantity) -> bool {
    use Quantity::*;
    match (lhs, rhs) {
        (Integer(a), Integer(b)) => match rel {
            Relation::Le => a <= b,
            Relation::Ge => a >= b,
            Relation::Eq => a == b,
        },
        (Ln(_), _) | (_, Ln(_)) => {
            let (a, b) = (lhs.ln(), rhs.ln());
            match rel {
                Relation::Le => a <= b + REAL_TOLERANCE,
                Relation::Ge => a >= b - REAL_TOLERANCE,
                Relation::Eq => (a - b).abs() <= REAL_TOLERANCE,
            }
        }
        _ => {
            let (a, b) = (lhs.as_f64(), rhs.as_f64());
            let tol = REAL_TOLERANCE * a.abs().max(b.abs());
            match rel {
                Relation::Le => a <= b + tol,
                Relation::Ge => a >= b - tol,
                Relation::Eq => (a - b).abs() <= tol,
            }
        }
    }
}

/// Structured record of one checked inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub inputs: Value,
    pub lhs: Quantity,
    pub relation: Relation,
    pub rhs: Quantity,
    pub pass: bool,
    /// Non-gating reports record asymptotic statements that are not expected
    /// to hold at small sizes; they never affect the exit status.
    pub gating: bool,
    pub seed: u64,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, inputs: Value, lhs: Quantity, relation: Relation, rhs: Quantity) -> Self {
        ExperimentReport {
            name: name.into(),
            inputs,
            pass: holds(lhs, relation, rhs),
            lhs,
            relation,
            rhs,
            gating: true,
            seed: 0,
            runtime_ms: 0,
            details: Value::Null,
            note: None,
        }
    }

    pub fn non_gating(mut self, note: impl Into<String>) -> Self {
        self.gating = false;
        self.note = Some(note.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// Gating reports must pass.
    pub fn ok(&self) -> bool {
        self.pass || !self.gating
    }
}

/// Canonical output order: by name, then seed.
pub fn sort_reports(reports: &mut [ExperimentReport]) {
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.seed.cmp(&b.seed)));
}

pub const CSV_HEADER: &str = "name,lhs,relation,rhs,pass,gating,seed,runtime_ms";

pub fn csv_row(r: &ExperimentReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.name,
        r.lhs.cell(),
        r.relation.symbol(),
        r.rhs.cell(),
        r.pass,
        r.gating,
        r.seed,
        r.runtime_ms
    )
}
