//! Report assembly.  The JSON form is deterministic for fixed inputs, seed
//! and tool version; wall-clock timings appear only in the human rendering
//! so that re-runs are byte-identical.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Hex sha-256 of a canonical description of the check's inputs.
    pub inputs: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip)]
    pub elapsed: f64,
}

#[derive(Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
}

pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0u8]);
        }
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &'static str, seed: Option<u64>) -> Report {
        Report {
            tool: "braidcob",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            checks: Vec::new(),
            all_pass: true,
            payload: None,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.all_pass &= record.verdict == "pass";
        self.checks.push(record);
    }

    /// Runs one timed check.  The closure returns pass/fail, an optional
    /// sign, and an optional witness summary.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        inputs: String,
        body: impl FnOnce() -> (bool, Option<i8>, Option<String>),
    ) {
        let start = std::time::Instant::now();
        let (ok, sign, witness) = body();
        self.push(CheckRecord {
            name: name.into(),
            inputs,
            verdict: if ok { "pass" } else { "fail" },
            sign,
            witness,
            elapsed: start.elapsed().as_secs_f64(),
        });
    }

    /// Prints the report and returns whether everything passed.
    pub fn emit(&self, json: bool) -> bool {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
        } else {
            println!("{} {} — {}", self.tool, self.version, self.command);
            for c in &self.checks {
                let sign = c.sign.map(|s| format!(" sign {s:+}")).unwrap_or_default();
                let witness =
                    c.witness.as_deref().map(|w| format!(" — {w}")).unwrap_or_default();
                println!("  [{}] {}{} ({:.2}s){}", c.verdict, c.name, sign, c.elapsed, witness);
            }
            println!("{}", if self.all_pass { "all checks passed" } else { "FAILURES PRESENT" });
        }
        self.all_pass
    }
}
