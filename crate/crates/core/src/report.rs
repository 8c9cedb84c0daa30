//! Structured pass/fail results for the verifiers.
//!
//! Exact quantities are carried as decimal or `p/q` strings so that big
//! integers never pass through a float.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    /// Exact integer or rational, as a lossless string.
    Exact { value: String },
    /// Floating estimate with an optional 95% half-width.
    Float { value: f64, ci95: Option<f64> },
    Bool { value: bool },
    Text { value: String },
    List { values: Vec<Value> },
}

impl Value {
    pub fn exact(v: impl ToString) -> Self {
        Value::Exact { value: v.to_string() }
    }
    pub fn float(v: f64) -> Self {
        Value::Float { value: v, ci95: None }
    }
    pub fn float_ci(v: f64, ci: f64) -> Self {
        Value::Float { value: v, ci95: Some(ci) }
    }
    pub fn text(v: impl Into<String>) -> Self {
        Value::Text { value: v.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks are recorded but never fail a report.
    #[serde(default)]
    pub informational: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    /// The mathematical statement this check mirrors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirrors: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            informational: false,
            detail: detail.into(),
            values: BTreeMap::new(),
            mirrors: None,
        }
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { informational: true, ..Check::new(name, true, detail) }
    }

    pub fn with(mut self, key: impl Into<String>, v: Value) -> Self {
        self.values.insert(key.into(), v);
        self
    }

    pub fn mirrors(mut self, statement: impl Into<String>) -> Self {
        self.mirrors = Some(statement.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
