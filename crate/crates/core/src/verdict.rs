//! Pass/fail records produced by the verification routines.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// For failures, where it failed and a witness; for passes, an optional note.
    pub detail: String,
}

impl Verdict {
    pub fn pass(name: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed: true,
            detail: String::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    pub fn check(name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, detail())
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", if self.passed { "pass" } else { "FAIL" }, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// An ordered list of verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdicts: Vec<Verdict>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.verdicts.push(Verdict::check(name, ok, detail));
        ok
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.verdicts.extend(other.verdicts);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| !v.passed).collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}
