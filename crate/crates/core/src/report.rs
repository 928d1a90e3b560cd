//! Serializable verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::series::{HalfExponent, Verdict};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// First coefficient where two sides disagree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mismatch {
    pub exponent_half_units: i64,
    pub lhs: String,
    pub rhs: String,
    /// Indices of the compared sides in a multi-expression chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<[usize; 2]>,
    /// Sequence index (e.g. the `n` of a Bailey pair) where the mismatch occurred.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub order_half_units: i64,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Diagnostic checks are reported but never gate the exit code.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diagnostic: bool,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, params: BTreeMap<String, String>, order: HalfExponent) -> Self {
        VerificationReport {
            id: id.into(),
            params,
            order_half_units: order.0,
            status: Status::Pass,
            first_mismatch: None,
            elapsed_ms: 0,
            detail: None,
            diagnostic: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn fail_with(mut self, m: Mismatch) -> Self {
        self.status = Status::Fail;
        self.first_mismatch = Some(m);
        self
    }

    pub fn error_with(mut self, e: &Error) -> Self {
        self.status = Status::Error;
        self.detail = Some(e.to_string());
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }
}

impl Mismatch {
    pub fn from_verdict(v: &Verdict) -> Option<Mismatch> {
        match v {
            Verdict::Pass => None,
            Verdict::Fail { exponent, lhs, rhs } => Some(Mismatch {
                exponent_half_units: exponent.0,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                sides: None,
                index: None,
            }),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.id, self.status)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " {}", ps.join(" "))?;
        }
        write!(f, " order={} ({} ms)", HalfExponent(self.order_half_units), self.elapsed_ms)?;
        if let Some(m) = &self.first_mismatch {
            write!(f, "\n  first mismatch at q^{}: lhs {} vs rhs {}", HalfExponent(m.exponent_half_units), m.lhs, m.rhs)?;
            if let Some([i, j]) = m.sides {
                write!(f, " (sides {i} and {j})")?;
            }
            if let Some(n) = m.index {
                write!(f, " (n = {n})")?;
            }
        }
        if let Some(d) = &self.detail {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_names() {
        let r = VerificationReport::new("eq1.3", BTreeMap::new(), HalfExponent(120));
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["elapsed_ms", "first_mismatch", "id", "order_half_units", "params", "status"]);
        assert_eq!(v["status"], "pass");
        assert!(v["first_mismatch"].is_null());
    }

    #[test]
    fn round_trip_with_mismatch() {
        let mut p = BTreeMap::new();
        p.insert("x".to_string(), "symbolic".to_string());
        let r = VerificationReport::new("thm3.2-3.5", p, HalfExponent(60)).fail_with(Mismatch {
            exponent_half_units: 5,
            lhs: "1 - x".into(),
            rhs: "0".into(),
            sides: Some([0, 1]),
            index: None,
        });
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
