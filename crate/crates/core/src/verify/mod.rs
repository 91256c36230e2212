//! Verification suites: the fixed 2×2 counterexamples reproduced exactly,
//! and a seeded fuzz battery over every equivalence and representation
//! identity.

mod counterexamples;
mod fuzz;
pub mod gen;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use crate::densela::Tolerances;

pub use counterexamples::run_counterexamples;
pub use fuzz::{fuzz, FuzzError, MAX_FUZZ_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed, but the instance has a verdict that flips under a ×10 or
    /// ×0.1 change of the rank threshold.
    Fragile,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl Case {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            residuals: BTreeMap::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn residual(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), value);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records `text` and marks the case failed when `ok` is false.
    fn check(&mut self, ok: bool, text: impl Into<String>) {
        if !ok {
            self.status = Status::Fail;
            self.notes.push(text.into());
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub fragile: usize,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    /// Sorted by name.
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub tolerances: Tolerances,
}

impl SuiteReport {
    fn new(
        suite: &'static str,
        seed: u64,
        trials: usize,
        max_dim: usize,
        mut cases: Vec<Case>,
        tolerances: Tolerances,
    ) -> Self {
        cases.sort_by(|x, y| x.name.cmp(&y.name));
        let mut summary = Summary {
            total: cases.len(),
            ..Default::default()
        };
        for c in &cases {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Fragile => summary.fragile += 1,
            }
        }
        Self {
            suite,
            seed,
            trials,
            max_dim,
            cases,
            summary,
            tolerances,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn case(&self, name: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.name == name)
    }

    /// JSON with sorted keys. Elapsed times are included only on request
    /// so that equal seeds give byte-identical documents.
    pub fn to_json(&self, timings: bool) -> Value {
        let cases: Vec<Value> = self
            .cases
            .iter()
            .map(|c| {
                let mut v = json!({
                    "name": c.name,
                    "status": c.status,
                    "residuals": c.residuals,
                    "notes": c.notes,
                });
                if timings {
                    v["elapsed_s"] = json!(c.elapsed.as_secs_f64());
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "max_dim": self.max_dim,
            "cases": cases,
            "summary": self.summary,
            "tolerances": self.tolerances,
        })
    }
}
