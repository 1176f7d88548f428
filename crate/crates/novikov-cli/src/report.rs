//! Machine-readable command reports:
//! `{command, inputs, checks: [{id, status, witness?}], exit}`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckItem {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub checks: Vec<CheckItem>,
    pub exit: i32,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Vec<String>) -> Self {
        Report {
            command: command.into(),
            inputs,
            checks: Vec::new(),
            exit: 0,
        }
    }

    pub fn check(&mut self, id: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(CheckItem {
            id: id.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
        });
    }

    pub fn check_status(&mut self, id: impl Into<String>, status: Status, witness: Option<String>) {
        self.checks.push(CheckItem {
            id: id.into(),
            status,
            witness,
        });
    }

    /// Informational line, always passing, carried in the witness field.
    pub fn info(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.check(id, true, Some(witness.into()));
    }

    /// Exit 0 when every check passed, else 1.
    pub fn finalize(mut self) -> Report {
        self.exit = if self.checks.iter().all(|c| c.status == Status::Pass) {
            0
        } else {
            1
        };
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}: {}\n", self.command, self.inputs.join(" ")));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            match &c.witness {
                Some(w) if w.contains('\n') => {
                    out.push_str(&format!("[{tag}] {}\n", c.id));
                    for line in w.lines() {
                        out.push_str(&format!("    {line}\n"));
                    }
                }
                Some(w) => out.push_str(&format!("[{tag}] {} — {w}\n", c.id)),
                None => out.push_str(&format!("[{tag}] {}\n", c.id)),
            }
        }
        out.push_str(&format!("exit: {}\n", self.exit));
        out
    }
}
