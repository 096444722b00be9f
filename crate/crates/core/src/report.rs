//! Machine-readable verification reports.
//!
//! A report is a flat list of records sorted by id. Everything in it is a
//! function of the inputs except `generated_at_unix` and the per-record
//! `runtime_ms`; [`Report::canonical`] zeroes both for diffing.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Asserted but not verified here; never counted as a pass.
    Claimed,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Claimed => "claimed",
            Status::Skipped => "skipped",
        }
    }

    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub status: Status,
    pub witness: Value,
    pub runtime_ms: f64,
}

impl Record {
    pub fn new(id: impl Into<String>, status: Status, witness: Value) -> Record {
        Record {
            id: id.into(),
            status,
            witness,
            runtime_ms: 0.0,
        }
    }

    /// Runs `f` and records how long it took.
    pub fn timed(id: impl Into<String>, f: impl FnOnce() -> (Status, Value)) -> Record {
        let t0 = Instant::now();
        let (status, witness) = f();
        Record {
            id: id.into(),
            status,
            witness,
            runtime_ms: t0.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub claimed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub generated_at_unix: u64,
    pub counts: Counts,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(suite: impl Into<String>, mut records: Vec<Record>) -> Report {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut counts = Counts::default();
        for r in &records {
            match r.status {
                Status::Pass => counts.pass += 1,
                Status::Fail => counts.fail += 1,
                Status::Claimed => counts.claimed += 1,
                Status::Skipped => counts.skipped += 1,
            }
        }
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            counts,
            records,
        }
    }

    pub fn failed(&self) -> bool {
        self.counts.fail > 0
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn claimed(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Claimed)
    }

    /// The same report with the timestamp and runtimes zeroed.
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        r.generated_at_unix = 0;
        for rec in &mut r.records {
            rec.runtime_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_counted_and_exit_code() {
        let r = Report::new(
            "t",
            vec![
                Record::new("b", Status::Claimed, json!(null)),
                Record::new("a", Status::Pass, json!({"x": 1})),
            ],
        );
        assert_eq!(r.records[0].id, "a");
        assert_eq!(r.counts.claimed, 1);
        assert_eq!(r.exit_code(), 0);
        let bad = Report::new("t", vec![Record::new("c", Status::Fail, json!(null))]);
        assert_eq!(bad.exit_code(), 1);
        assert!(r.to_json().contains("\"status\": \"claimed\""));
    }

    #[test]
    fn canonical_form_ignores_timing() {
        let mk = || Report::new("t", vec![Record::timed("a", || (Status::Pass, json!(3)))]);
        assert_eq!(mk().canonical().to_json(), mk().canonical().to_json());
        let back: Report = serde_json::from_str(&mk().to_json()).unwrap();
        assert_eq!(back.records[0].status, Status::Pass);
    }
}
