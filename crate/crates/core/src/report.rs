//! Check records, the JSON report and the exit-code contract.

use serde::Serialize;
use serde_json::Value;

use crate::expr::ZeroVerdict;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
    Error,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Warn => "WARN",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }

    pub fn from_zero(v: &ZeroVerdict) -> Verdict {
        match v {
            ZeroVerdict::SymbolicZero => Verdict::Pass,
            ZeroVerdict::ProbablyZero { .. } => Verdict::Warn,
            ZeroVerdict::NonZero { .. } => Verdict::Fail,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// The worse of two verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Value,
    /// Wall-clock time; zero unless timing was requested.
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: u32,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(seed: u64) -> Report {
        Report {
            version: REPORT_VERSION,
            seed,
            checks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `2` if any check errored, `1` if any failed (or warned under `strict`), else `0`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        let worst = self.checks.iter().map(|c| c.verdict).max();
        match worst {
            Some(Verdict::Error) => 2,
            Some(Verdict::Fail) => 1,
            Some(Verdict::Warn) if strict => 1,
            _ => 0,
        }
    }

    /// One line per check: verdict, name and a compact witness.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<5} {}", c.verdict.as_str(), c.name));
            if c.verdict != Verdict::Pass {
                out.push_str(&format!("  {}", c.witness));
            }
            out.push('\n');
        }
        out
    }
}
