//! Verification reports: a check name, how many cases were examined, and every violation.

use std::fmt;

use serde::Serialize;

use crate::element::Element;
use crate::scalar::Scalar;
use crate::tensor::TensorTermJson;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Residual {
    Scalar(Scalar),
    Element(Element),
    Tensor(Vec<TensorTermJson>),
    Float(f64),
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub indices: Vec<String>,
    pub residual: Residual,
}

impl Violation {
    pub fn new<I, S>(indices: I, residual: Residual) -> Self
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        Self { indices: indices.into_iter().map(|s| s.to_string()).collect(), residual }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(check: impl Into<String>, checked: usize, violations: Vec<Violation>) -> Self {
        Self { check: check.into(), pass: violations.is_empty(), checked, violations }
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    /// Merges several reports under one check name.
    pub fn merge(check: impl Into<String>, parts: impl IntoIterator<Item = Report>) -> Self {
        let mut checked = 0;
        let mut violations = Vec::new();
        for r in parts {
            checked += r.checked;
            violations.extend(r.violations.into_iter().map(|mut v| {
                v.indices.insert(0, r.check.clone());
                v
            }));
        }
        Self::new(check, checked, violations)
    }

    /// `PASS <name> checked=<n> violations=<m>`
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} checked={} violations={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.checked,
            self.violations.len()
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for v in self.violations.iter().take(20) {
            let residual = serde_json::to_string(&v.residual).unwrap_or_else(|_| format!("{:?}", v.residual));
            writeln!(f, "  at ({}) residual {residual}", v.indices.join(", "))?;
        }
        if self.violations.len() > 20 {
            writeln!(f, "  ... {} more", self.violations.len() - 20)?;
        }
        Ok(())
    }
}
