use std::collections::BTreeMap;
use std::fmt;

use ncps_core::functionals::VanishingLevel;
use serde::Serialize;
use serde_json::Value;

/// Longest detail value shown in the text rendering.
const TEXT_WIDTH: usize = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// How far a vanishing statement had to go; `n-a` for numerical checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    #[serde(rename = "density")]
    Density,
    #[serde(rename = "trace")]
    Trace,
    #[serde(rename = "tau")]
    Tau,
    #[serde(rename = "none")]
    None,
    #[serde(rename = "n-a")]
    NotApplicable,
}

impl From<VanishingLevel> for Level {
    fn from(v: VanishingLevel) -> Self {
        match v {
            VanishingLevel::Density => Level::Density,
            VanishingLevel::Trace => Level::Trace,
            VanishingLevel::Tau => Level::Tau,
            VanishingLevel::None => Level::None,
        }
    }
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Density => "density",
            Level::Trace => "trace",
            Level::Tau => "tau",
            Level::None => "none",
            Level::NotApplicable => "n-a",
        }
    }

    /// The weaker of two levels.
    pub fn weakest(self, other: Level) -> Level {
        let rank = |l: Level| match l {
            Level::Density => 0,
            Level::Trace => 1,
            Level::Tau => 2,
            Level::None => 3,
            Level::NotApplicable => -1,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub vanishing_level: Level,
    /// First offending expression; present exactly when the check failed.
    pub witness: Option<String>,
    pub parameters: BTreeMap<String, Value>,
    pub details: BTreeMap<String, Value>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn new(check: &str, parameters: BTreeMap<String, Value>) -> Self {
        CheckReport {
            check: check.to_string(),
            status: Status::Pass,
            vanishing_level: Level::NotApplicable,
            witness: None,
            parameters,
            details: BTreeMap::new(),
            elapsed_ms: 0,
        }
    }

    /// Marks the report failed unless it already carries a witness.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
        self.status = Status::Fail;
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {} (vanishing level {}, {} ms)", self.check, self.status.as_str(), self.vanishing_level.as_str(), self.elapsed_ms)?;
        if let Some(w) = &self.witness {
            writeln!(f, "  witness: {}", w)?;
        }
        for (k, v) in &self.details {
            let text = v.to_string();
            if text.chars().count() > TEXT_WIDTH {
                let head: String = text.chars().take(TEXT_WIDTH).collect();
                writeln!(f, "  {}: {} ... ({} chars, full value in --json)", k, head, text.len())?;
            } else {
                writeln!(f, "  {}: {}", k, text)?;
            }
        }
        Ok(())
    }
}
