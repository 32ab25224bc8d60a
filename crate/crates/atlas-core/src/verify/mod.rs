//! Executable predicates for the structural theorems: each check consumes
//! traced curves and located zeros and produces a pass/fail/inconclusive
//! report with a margin and witnesses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geom::Rect;

mod checks;
mod suite;

pub use checks::*;
pub use suite::{run_suite, SuiteArtifacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub location: Option<Complex64>,
    pub curve: Option<String>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub spec_id: String,
    pub window: Rect,
    pub verdict: Verdict,
    /// Distance to violation: positive slack for passes.
    pub margin: f64,
    pub witnesses: Vec<Witness>,
    pub tolerances: Vec<(String, f64)>,
    /// Reason for an inconclusive verdict.
    pub reason: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub(crate) fn new(name: &str, spec_id: &str, window: Rect) -> Self {
        CheckReport {
            name: name.into(),
            spec_id: spec_id.into(),
            window,
            verdict: Verdict::Pass,
            margin: f64::INFINITY,
            witnesses: Vec::new(),
            tolerances: Vec::new(),
            reason: None,
        }
    }

    pub(crate) fn fail(&mut self, location: Option<Complex64>, curve: Option<String>, note: String) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(Witness {
            location,
            curve,
            note,
        });
    }

    pub(crate) fn inconclusive(&mut self, reason: String) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Inconclusive;
        }
        self.reason = Some(reason);
    }
}
