use serde::Serialize;
use serde_json::Value;

use crate::format::{InstanceFile, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Verdict {
    pub fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status,
            detail: detail.into(),
            counterexample: None,
        }
    }

    pub fn check(
        name: &str,
        passed: bool,
        detail: impl Into<String>,
        counterexample: impl FnOnce() -> Value,
    ) -> Self {
        Verdict {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            counterexample: (!passed).then(counterexample),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    /// Human-readable table, not part of the JSON.
    #[serde(skip)]
    pub table: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, instance: Option<InstanceFile>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            instance,
            provenance: None,
            results: Value::Null,
            verdicts: Vec::new(),
            timing_ms: None,
            table: Vec::new(),
        }
    }

    /// 1 on any failure, else 3 on anything inconclusive, else 0.
    pub fn exit_code(&self) -> u8 {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            1
        } else if self
            .verdicts
            .iter()
            .any(|v| v.status == Status::Inconclusive)
        {
            3
        } else {
            0
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("reports serialize");
        }
        let mut out = String::new();
        for line in &self.table {
            out.push_str(line);
            out.push('\n');
        }
        for v in &self.verdicts {
            let status = match v.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
                Status::Skipped => "skipped",
            };
            out.push_str(&format!("{:<14} {:<13} {}\n", v.name, status, v.detail));
            if let Some(c) = &v.counterexample {
                out.push_str(&format!("  counterexample: {c}\n"));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("elapsed {ms} ms\n"));
        }
        out
    }
}

/// `i | λ(H_i) | χ_i` rows.
pub fn profile_table(homology: &[usize], chis: &[i64]) -> Vec<String> {
    let mut rows = vec![format!("{:>3} {:>8} {:>8}", "i", "λ(H_i)", "χ_i")];
    for (i, (h, c)) in homology.iter().zip(chis).enumerate() {
        rows.push(format!("{i:>3} {h:>8} {c:>8}"));
    }
    rows
}
