//! Verification report: per-stage outcomes with timings, serialized to JSON
//! and summarized on stdout. Timings vary run to run; everything else in the
//! report is deterministic.

use std::time::Instant;

use serde::Serialize;

#[derive(Serialize)]
pub struct StageResult {
    pub name: String,
    pub passed: bool,
    pub millis: u128,
    pub details: String,
}

#[derive(Serialize)]
pub struct ReportConfig {
    pub p: u64,
    pub fusion: Option<String>,
    pub lemma: Option<String>,
    pub budget: Option<u64>,
    pub override_max_p: bool,
}

#[derive(Serialize)]
pub struct Report {
    pub version: String,
    pub config: ReportConfig,
    pub stages: Vec<StageResult>,
    pub skipped: Vec<String>,
    pub passed: bool,
    pub inconclusive: bool,
}

impl Report {
    pub fn new(config: ReportConfig) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            stages: Vec::new(),
            skipped: Vec::new(),
            passed: true,
            inconclusive: false,
        }
    }

    /// Run one stage; the closure reports success and a detail line.
    pub fn stage(&mut self, name: &str, f: impl FnOnce() -> StageOutcome) {
        let start = Instant::now();
        let outcome = f();
        let millis = start.elapsed().as_millis();
        match outcome {
            StageOutcome::Done { passed, details } => {
                if !passed {
                    self.passed = false;
                }
                println!(
                    "[{}] {name}: {details} ({millis} ms)",
                    if passed { "pass" } else { "FAIL" }
                );
                self.stages.push(StageResult {
                    name: name.to_string(),
                    passed,
                    millis,
                    details,
                });
            }
            StageOutcome::Inconclusive(details) => {
                self.inconclusive = true;
                println!("[????] {name}: inconclusive, {details} ({millis} ms)");
                self.stages.push(StageResult {
                    name: name.to_string(),
                    passed: false,
                    millis,
                    details,
                });
            }
        }
    }

    pub fn skip(&mut self, name: &str, why: &str) {
        println!("[skip] {name}: {why}");
        self.skipped.push(name.to_string());
    }
}

pub enum StageOutcome {
    Done { passed: bool, details: String },
    Inconclusive(String),
}

pub fn pass(details: impl Into<String>) -> StageOutcome {
    StageOutcome::Done {
        passed: true,
        details: details.into(),
    }
}

pub fn fail(details: impl Into<String>) -> StageOutcome {
    StageOutcome::Done {
        passed: false,
        details: details.into(),
    }
}

pub fn check(passed: bool, details: impl Into<String>) -> StageOutcome {
    StageOutcome::Done {
        passed,
        details: details.into(),
    }
}
