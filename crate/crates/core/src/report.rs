//! Check reports shared by all verification operations.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check consumed data above a truncation degree and cannot decide.
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One named check with an optional witness describing a failure.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn inconclusive(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Inconclusive,
            witness: Some(witness.into()),
        }
    }
}

/// Ordered list of checks; the overall verdict is fail if any check
/// failed, else inconclusive if any check was, else pass.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn verdict(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::Inconclusive)
        {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == CheckStatus::Pass
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<50} {}", c.name, c.status)?;
            if let Some(w) = &c.witness {
                write!(f, "  [{w}]")?;
            }
            writeln!(f)?;
        }
        write!(f, "verdict: {}", self.verdict())
    }
}
