//! Check records and verification reports.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::Result;
use crate::expr::Expr;
use crate::forms::{PointSet, ResidualNorm};
use crate::Real;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance classes for residual checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Identities that hold by algebra alone, such as `d∘d = 0`.
    pub structural: T,
    /// Identities that pass through the full symbolic pipeline.
    pub pipeline: T,
    /// Relative error of quadratures.
    pub quadrature: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            structural: T::from_f64_lossy(1e-10),
            pipeline: T::from_f64_lossy(1e-9),
            quadrature: T::from_f64_lossy(1e-3),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Same residual tolerance for every symbolic check.
    pub fn uniform(tol: T) -> Self {
        Tolerances { structural: tol, pipeline: tol, ..Default::default() }
    }
}

/// Whether a check expects its residual to vanish or to be visibly nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Zero,
    Nonzero,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, written out.
    pub eq: String,
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_as_nan")]
    pub max: f64,
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_as_nan")]
    pub rms: f64,
    pub tol: f64,
    pub pass: bool,
    pub excluded: usize,
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// Passes iff `max ≤ tol`.
    pub fn zero<T: Real>(id: impl Into<String>, eq: impl Into<String>, r: ResidualNorm<T>, tol: T, excluded: usize) -> Self {
        let max = r.max.to_f64_lossy();
        let tol = tol.to_f64_lossy();
        CheckRecord {
            id: id.into(),
            eq: eq.into(),
            max,
            rms: r.rms.to_f64_lossy(),
            tol,
            pass: max <= tol,
            excluded,
            expect: Expect::Zero,
            note: None,
        }
    }

    /// Passes iff `max ≥ threshold`: the quantity is meant to be visibly
    /// nonzero somewhere on the sample.
    pub fn nonzero<T: Real>(
        id: impl Into<String>,
        eq: impl Into<String>,
        r: ResidualNorm<T>,
        threshold: T,
        excluded: usize,
    ) -> Self {
        let max = r.max.to_f64_lossy();
        let tol = threshold.to_f64_lossy();
        CheckRecord {
            id: id.into(),
            eq: eq.into(),
            max,
            rms: r.rms.to_f64_lossy(),
            tol,
            pass: max >= tol,
            excluded,
            expect: Expect::Nonzero,
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(id: impl Into<String>, eq: impl Into<String>, note: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            eq: eq.into(),
            max: f64::NAN,
            rms: f64::NAN,
            tol: 0.0,
            pass: false,
            excluded: 0,
            expect: Expect::Zero,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Evaluates `exprs` on `points` and records whether they vanish.
pub fn vanishing<T: Real>(
    id: impl Into<String>,
    eq: impl Into<String>,
    exprs: &[Expr],
    points: &PointSet<T>,
    tol: T,
) -> CheckRecord {
    let (id, eq) = (id.into(), eq.into());
    match points.norm(exprs, &id) {
        Ok(r) => CheckRecord::zero(id, eq, r, tol, points.excluded()),
        Err(e) => CheckRecord::failed(id, eq, e.to_string()),
    }
}

/// Evaluates `exprs` on `points` and records whether they are visibly
/// nonzero somewhere.
pub fn nonvanishing<T: Real>(
    id: impl Into<String>,
    eq: impl Into<String>,
    exprs: &[Expr],
    points: &PointSet<T>,
    threshold: T,
) -> CheckRecord {
    let (id, eq) = (id.into(), eq.into());
    match points.norm(exprs, &id) {
        Ok(r) => CheckRecord::nonzero(id, eq, r, threshold, points.excluded()),
        Err(e) => CheckRecord::failed(id, eq, e.to_string()),
    }
}

/// Converts a fallible residual into a record.
pub fn record<T: Real>(
    id: impl Into<String>,
    eq: impl Into<String>,
    r: Result<ResidualNorm<T>>,
    tol: T,
    excluded: usize,
) -> CheckRecord {
    let (id, eq) = (id.into(), eq.into());
    match r {
        Ok(r) => CheckRecord::zero(id, eq, r, tol, excluded),
        Err(e) => CheckRecord::failed(id, eq, e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub engine_version: String,
    pub seed: u64,
    /// Resolved orientation, `+1` or `-1`.
    pub sign: i32,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Report {
            scenario: scenario.into(),
            engine_version: ENGINE_VERSION.to_string(),
            seed: 0,
            sign: -1,
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(cs);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
    }

    /// JSON with the wall time zeroed, for byte comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "scenario {} (engine {}, seed {}, sign {:+})\n",
            self.scenario, self.engine_version, self.seed, self.sign
        );
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let cmp = match c.expect {
                Expect::Zero => "<=",
                Expect::Nonzero => ">=",
            };
            out.push_str(&format!(
                "{verdict} {:<40} max={:<12.3e} rms={:<12.3e} {cmp} {:.1e} excluded={} [{}]",
                c.id, c.max, c.rms, c.tol, c.excluded, c.eq
            ));
            if let Some(n) = &c.note {
                out.push_str(&format!(" ({n})"));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed, {} ms\n", self.checks.len(), failed, self.elapsed_ms));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_max_within_tolerance() {
        let r = ResidualNorm { max: 1e-11, rms: 1e-12, samples: 4 };
        assert!(CheckRecord::zero("a", "x = 0", r, 1e-10, 0).pass);
        assert!(!CheckRecord::zero("a", "x = 0", r, 1e-12, 0).pass);
        let nan = ResidualNorm { max: f64::NAN, rms: f64::NAN, samples: 1 };
        assert!(!CheckRecord::zero("a", "x = 0", nan, 1.0, 0).pass);
    }

    #[test]
    fn json_round_trip() {
        let mut rep = Report::new("demo");
        rep.push(CheckRecord::zero("a", "x = 0", ResidualNorm { max: 0.0, rms: 0.0, samples: 1 }, 1e-10, 3));
        rep.push(CheckRecord::failed("b", "y = 0", "boom"));
        let text = rep.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks[0], rep.checks[0]);
        assert!(back.checks[1].max.is_nan());
        assert!(text.contains("\"max\": null"));
    }

    #[test]
    fn text_has_one_line_per_check() {
        let mut rep = Report::new("demo");
        for i in 0..3 {
            rep.push(CheckRecord::zero(format!("c{i}"), "x = 0", ResidualNorm { max: 0.0, rms: 0.0, samples: 1 }, 1e-10, 0));
        }
        let text = rep.to_text();
        assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    }
}
