//! Machine- and human-readable command reports.
//!
//! A report is an ordered list of checks; rendering is deterministic for a
//! fixed report (fixed-format floats, ordered rows).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

/// Fixed-width scientific notation used for every numeric cell.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn info(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Info,
            value: value.into(),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, value: impl Into<String>) {
        if !passed {
            self.overall = false;
        }
        self.checks.push(Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value: value.into(),
        });
    }

    /// Records a mathematical failure surfaced as an error value.
    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.check(name, false, detail);
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# proframe report: {}\n\n", self.command));
        out.push_str("| check | status | value |\n|---|---|---|\n");
        for check in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                check.name, check.status, check.value
            ));
        }
        out.push_str(&format!(
            "\noverall: {} ({} checks)\n",
            if self.overall { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_markdown()
        }
    }
}
