//! Structured results of inequality and identity checks.

use std::io::Write;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::polytope::{digest_bodies, VPolytope};
use crate::rational::{format_rational, serde_string, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `lhs ≤ rhs` is claimed; a negative gap is a violation.
    Inequality,
    /// `lhs = rhs` is claimed; any nonzero gap is a violation.
    Identity,
}

/// Parameters of a check. Unused fields are omitted from the JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kvec: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    /// Cover blocks, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
}

impl ReportParams {
    pub fn np(n: usize, p: usize) -> Self {
        Self { n: Some(n), p: Some(p), ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: ReportParams,
    pub kind: CheckKind,
    #[serde(with = "serde_string")]
    pub lhs: Rational,
    #[serde(with = "serde_string")]
    pub rhs: Rational,
    /// `rhs − lhs`.
    #[serde(with = "serde_string")]
    pub gap: Rational,
    pub equality: bool,
    pub expected_equality: bool,
    /// The statement is a theorem for this input (not merely conjectured).
    pub proven: bool,
    pub violation: bool,
    pub body_digest: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub witnesses: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, kind: CheckKind, params: ReportParams, lhs: Rational, rhs: Rational) -> Self {
        let gap = &rhs - &lhs;
        let equality = gap.is_zero();
        let violation = match kind {
            CheckKind::Inequality => gap.is_negative(),
            CheckKind::Identity => !equality,
        };
        Self {
            name: name.into(),
            params,
            kind,
            lhs,
            rhs,
            gap,
            equality,
            expected_equality: kind == CheckKind::Identity,
            proven: kind == CheckKind::Identity,
            violation,
            body_digest: String::new(),
            notes: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn inequality(name: impl Into<String>, params: ReportParams, lhs: Rational, rhs: Rational) -> Self {
        Self::new(name, CheckKind::Inequality, params, lhs, rhs)
    }

    pub fn identity(name: impl Into<String>, params: ReportParams, lhs: Rational, rhs: Rational) -> Self {
        Self::new(name, CheckKind::Identity, params, lhs, rhs)
    }

    pub fn with_expected_equality(mut self, expected: bool) -> Self {
        self.expected_equality = expected;
        self
    }

    pub fn with_proven(mut self, proven: bool) -> Self {
        self.proven = proven;
        self
    }

    pub fn with_bodies(mut self, bodies: &[VPolytope]) -> Self {
        self.body_digest = digest_bodies(bodies);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_witnesses(mut self, witnesses: Vec<VerificationReport>) -> Self {
        self.witnesses = witnesses;
        self
    }

    /// True when the equality flag disagrees with the predicted equality case.
    pub fn equality_mismatch(&self) -> bool {
        self.equality != self.expected_equality
    }

    /// This report or any witness is a violation.
    pub fn any_violation(&self) -> bool {
        self.violation || self.witnesses.iter().any(VerificationReport::any_violation)
    }

    pub fn status(&self) -> &'static str {
        if self.any_violation() {
            "VIOLATION"
        } else {
            "pass"
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line for terminals.
    pub fn summary_line(&self) -> String {
        format!(
            "{:<9} {} lhs={} rhs={} gap={} equality={} expected={}",
            self.status(),
            self.name,
            format_rational(&self.lhs),
            format_rational(&self.rhs),
            format_rational(&self.gap),
            self.equality,
            self.expected_equality
        )
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    trial: Option<u64>,
    params: String,
    lhs: String,
    rhs: String,
    gap: String,
    lhs_approx: f64,
    rhs_approx: f64,
    gap_approx: f64,
    equality: bool,
    expected_equality: bool,
    proven: bool,
    violation: bool,
    body_digest: &'a str,
}

/// Top-level reports as CSV: exact strings plus `f64` approximations.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow {
            name: &r.name,
            trial: r.params.trial,
            params: serde_json::to_string(&r.params)?,
            lhs: format_rational(&r.lhs),
            rhs: format_rational(&r.rhs),
            gap: format_rational(&r.gap),
            lhs_approx: to_f64(&r.lhs),
            rhs_approx: to_f64(&r.rhs),
            gap_approx: to_f64(&r.gap),
            equality: r.equality,
            expected_equality: r.expected_equality,
            proven: r.proven,
            violation: r.violation,
            body_digest: &r.body_digest,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn gap_and_violation() {
        let ok = VerificationReport::inequality("x", ReportParams::default(), int(1), int(2));
        assert_eq!(ok.gap, int(1));
        assert!(!ok.equality && !ok.violation);
        let bad = VerificationReport::inequality("x", ReportParams::default(), int(3), int(2));
        assert!(bad.violation);
        assert_eq!(bad.status(), "VIOLATION");
        let id = VerificationReport::identity("x", ReportParams::default(), int(3), int(4));
        assert!(id.violation);
        let nested = VerificationReport::inequality("y", ReportParams::default(), int(0), int(0)).with_witnesses(vec![id]);
        assert!(!nested.violation && nested.any_violation());
    }

    #[test]
    fn json_shape() {
        let r = VerificationReport::inequality("godbersen", ReportParams { n: Some(2), k: Some(1), ..Default::default() }, ratio(1, 2), int(1));
        let v: serde_json::Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
        assert_eq!(v["lhs"], "1/2");
        assert_eq!(v["gap"], "1/2");
        assert_eq!(v["params"], serde_json::json!({"n": 2, "k": 1}));
        for key in ["name", "params", "lhs", "rhs", "gap", "equality", "expected_equality", "proven", "witnesses"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn csv_has_exact_and_float_columns() {
        let r = VerificationReport::inequality("a", ReportParams::default(), ratio(1, 3), int(1));
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("name,trial,params,lhs,rhs,gap,lhs_approx"));
        assert!(text.contains("1/3,1,2/3,0.333"));
    }
}
