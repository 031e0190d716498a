//! Machine- and human-readable check reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub items: Vec<CheckItem>,
    pub millis: u128,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            items: Vec::new(),
            millis: 0,
        }
    }

    pub fn record(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) {
        self.items.push(CheckItem {
            name: name.into(),
            pass,
            witness,
        });
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn merge(&mut self, other: Report) {
        for item in other.items {
            self.items.push(CheckItem {
                name: format!("{}/{}", other.name, item.name),
                pass: item.pass,
                witness: item.witness,
            });
        }
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.name,
            if self.pass() { "PASS" } else { "FAIL" }
        )?;
        for item in &self.items {
            write!(
                f,
                "  [{}] {}",
                if item.pass { "ok" } else { "FAIL" },
                item.name
            )?;
            if let Some(w) = &item.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
