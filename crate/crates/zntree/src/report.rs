//! Structured check reports. A failing report always carries at least one
//! fully evaluated witness; a passing report records the exhaustive range it
//! scanned. Reports serialize to JSON and render to a deterministic text
//! form.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// An offending (or notable) tuple with all intermediate values rendered, so
/// the violation can be replayed in isolation.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub elements: Vec<String>,
    pub values: Vec<(String, String)>,
    pub detail: String,
}

impl Witness {
    pub fn new(elements: Vec<String>, values: Vec<(String, String)>, detail: &str) -> Witness {
        Witness {
            elements,
            values,
            detail: detail.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub radius: u32,
    pub verdict: Verdict,
    /// What was scanned; passes are explicitly ball-relative.
    pub scope: String,
    pub constants: Vec<(String, String)>,
    pub stats: Vec<(String, u64)>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, radius: u32, verdict: Verdict, scope: &str) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            radius,
            verdict,
            scope: scope.to_string(),
            constants: Vec::new(),
            stats: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn constant(mut self, name: &str, value: impl fmt::Display) -> CheckReport {
        self.constants.push((name.to_string(), value.to_string()));
        self
    }

    pub fn stat(mut self, name: &str, value: u64) -> CheckReport {
        self.stats.push((name.to_string(), value));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> CheckReport {
        self.notes.push(note.into());
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "[{}] verdict={} radius={} scope={}\n",
            self.check, self.verdict, self.radius, self.scope
        ));
        for (k, v) in &self.constants {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for (k, v) in &self.stats {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for w in &self.witnesses {
            out.push_str(&format!("  witness ({})", w.elements.join(", ")));
            if !w.values.is_empty() {
                let vals: Vec<String> = w.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!(" [{}]", vals.join(", ")));
            }
            out.push_str(&format!(": {}\n", w.detail));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
