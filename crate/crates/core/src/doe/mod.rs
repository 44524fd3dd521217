//! Experiment design: typed factor spaces and Latin hypercube designs.
//!
//! A factor space is a list of [`FactorSpec`]s (continuous, integer,
//! categorical or boolean). [`lhs_design`] turns it into a [`Design`], an
//! `n × k` matrix of [`Value`]s that the execution controller consumes
//! chunk by chunk.

mod io;
mod lhs;

pub use io::{read_design_csv, write_design_csv};
pub use lhs::lhs_design;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DoeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("factor `{name}`: {reason}")]
    InvalidFactor { name: String, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Domain of a single factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorKind {
    Continuous { lo: f64, hi: f64 },
    Integer { lo: i64, hi: i64 },
    Categorical { levels: Vec<String> },
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: FactorKind,
}

impl FactorSpec {
    pub fn continuous(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        FactorSpec {
            name: name.into(),
            kind: FactorKind::Continuous { lo, hi },
        }
    }

    pub fn integer(name: impl Into<String>, lo: i64, hi: i64) -> Self {
        FactorSpec {
            name: name.into(),
            kind: FactorKind::Integer { lo, hi },
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        levels: impl IntoIterator<Item = S>,
    ) -> Self {
        FactorSpec {
            name: name.into(),
            kind: FactorKind::Categorical {
                levels: levels.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        FactorSpec {
            name: name.into(),
            kind: FactorKind::Boolean,
        }
    }

    pub fn validate(&self) -> Result<(), DoeError> {
        let bad = |reason: &str| {
            Err(DoeError::InvalidFactor {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if self.name.trim().is_empty() {
            return bad("empty name");
        }
        match &self.kind {
            FactorKind::Continuous { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() {
                    return bad("bounds must be finite");
                }
                if lo >= hi {
                    return bad("lo must be strictly less than hi");
                }
            }
            FactorKind::Integer { lo, hi } => {
                if lo >= hi {
                    return bad("lo must be strictly less than hi");
                }
            }
            FactorKind::Categorical { levels } => {
                if levels.is_empty() {
                    return bad("no levels");
                }
                let distinct: BTreeSet<_> = levels.iter().collect();
                if distinct.len() != levels.len() {
                    return bad("levels must be pairwise distinct");
                }
            }
            FactorKind::Boolean => {}
        }
        Ok(())
    }

    /// Whether `v` lies in this factor's domain. Reason on failure.
    pub fn check_value(&self, v: &Value) -> Result<(), String> {
        match (&self.kind, v) {
            (FactorKind::Continuous { lo, hi }, Value::Real(x)) => {
                if x.is_finite() && *x >= *lo && *x <= *hi {
                    Ok(())
                } else {
                    Err(format!("{x} outside [{lo}, {hi}]"))
                }
            }
            (FactorKind::Integer { lo, hi }, Value::Int(x)) => {
                if x >= lo && x <= hi {
                    Ok(())
                } else {
                    Err(format!("{x} outside [{lo}, {hi}]"))
                }
            }
            (FactorKind::Categorical { levels }, Value::Level(s)) => {
                if levels.contains(s) {
                    Ok(())
                } else {
                    Err(format!("unknown level `{s}`"))
                }
            }
            (FactorKind::Boolean, Value::Bool(_)) => Ok(()),
            (_, other) => Err(format!("value {other} has the wrong type")),
        }
    }
}

/// Validates a factor list: each spec valid, names pairwise distinct.
pub fn validate_factors(factors: &[FactorSpec]) -> Result<(), DoeError> {
    let mut names = BTreeSet::new();
    for f in factors {
        f.validate()?;
        if !names.insert(f.name.as_str()) {
            return Err(DoeError::InvalidFactor {
                name: f.name.clone(),
                reason: "duplicate factor name".into(),
            });
        }
    }
    Ok(())
}

/// JSON factor-space document: `{ "factors": [ ... ] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpace {
    pub factors: Vec<FactorSpec>,
}

impl FactorSpace {
    pub fn from_json(text: &str) -> Result<Self, DoeError> {
        let space: FactorSpace = serde_json::from_str(text)?;
        validate_factors(&space.factors)?;
        Ok(space)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, DoeError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// A single design cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Level(String),
}

impl Value {
    /// Numeric view: reals, integers, and booleans as 0/1.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            Value::Level(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => f.write_str(&crate::table::format_real(*x)),
            Value::Int(i) => write!(f, "{i}"),
            Value::Level(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// A sampled design: `rows[i][j]` is the value of factor `j` in run `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub factors: Vec<FactorSpec>,
    pub rows: Vec<Vec<Value>>,
    /// Generation seed; `None` for designs loaded from a file.
    pub seed: Option<u64>,
}

impl Design {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Numeric column by factor name.
    pub fn numeric_column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.factor_index(name)?;
        self.rows.iter().map(|r| r[j].as_f64()).collect()
    }
}

/// A single domain violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub row: usize,
    pub factor: String,
    pub reason: String,
}

/// Outcome of [`validate_design`]; empty `violations` means ok.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every cell outside its factor's domain, plus rows whose width
/// does not match the factor count (reported against factor `*`).
pub fn validate_design(design: &Design) -> ValidationReport {
    let mut violations = Vec::new();
    let k = design.factors.len();
    for (r, row) in design.rows.iter().enumerate() {
        if row.len() != k {
            violations.push(Violation {
                row: r,
                factor: "*".into(),
                reason: format!("row has {} cells, expected {k}", row.len()),
            });
            continue;
        }
        for (f, v) in design.factors.iter().zip(row) {
            if let Err(reason) = f.check_value(v) {
                violations.push(Violation {
                    row: r,
                    factor: f.name.clone(),
                    reason,
                });
            }
        }
    }
    ValidationReport { violations }
}
