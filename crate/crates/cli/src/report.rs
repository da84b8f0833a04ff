//! Reports: a text table for people and a JSON document for tools. Both are
//! functions of the scenario alone, so reruns are byte-identical.

use std::fmt::Write as _;

use serde::Serialize;

use relcoh::verdict::VerificationReport;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerdictRecord {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Dimensions `dims[i]` in degree `lo + i`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimTable {
    pub title: String,
    pub lo: i32,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OperationReport {
    pub index: usize,
    pub op: String,
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    pub tables: Vec<DimTable>,
    pub verdicts: Vec<VerdictRecord>,
}

impl OperationReport {
    pub fn new(index: usize, op: &str, subject: impl Into<String>) -> Self {
        OperationReport {
            index,
            op: op.into(),
            subject: subject.into(),
            bound: None,
            tables: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn table(&mut self, title: impl Into<String>, lo: i32, dims: Vec<usize>) {
        self.tables.push(DimTable {
            title: title.into(),
            lo,
            dims,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl FnOnce() -> String) -> bool {
        let detail = if passed { String::new() } else { detail() };
        self.verdicts.push(VerdictRecord {
            name: name.into(),
            passed,
            detail,
        });
        passed
    }

    pub fn absorb(&mut self, rep: VerificationReport) {
        for v in rep.verdicts {
            self.verdicts.push(VerdictRecord {
                name: v.name,
                passed: v.passed,
                detail: v.detail,
            });
        }
    }

    pub fn expect_dims(&mut self, title: &str, expected: &[usize], dims: &[usize]) {
        let ok = expected.len() <= dims.len() && dims[..expected.len()] == *expected;
        self.check(format!("{title} matches the expected dimensions {expected:?}"), ok, || {
            format!("computed {dims:?}")
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub operations: usize,
    pub verdicts: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub scenario: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub mode: String,
    pub operations: Vec<OperationReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: &str, description: &str, mode: &str, operations: Vec<OperationReport>) -> Self {
        let verdicts = operations.iter().map(|o| o.verdicts.len()).sum();
        let failed = operations.iter().flat_map(|o| &o.verdicts).filter(|v| !v.passed).count();
        Report {
            scenario: scenario.into(),
            description: description.into(),
            mode: mode.into(),
            summary: Summary {
                operations: operations.len(),
                verdicts,
                failed,
            },
            operations,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = (&OperationReport, &VerdictRecord)> {
        self.operations
            .iter()
            .flat_map(|o| o.verdicts.iter().filter(|v| !v.passed).map(move |v| (o, v)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        if !self.description.is_empty() {
            let _ = writeln!(out, "  {}", self.description);
        }
        let _ = writeln!(out, "mode: {}", self.mode);
        for op in &self.operations {
            let _ = write!(out, "\n[{}] {}  {}", op.index + 1, op.op, op.subject);
            if let Some(b) = op.bound {
                let _ = write!(out, "  (bound {b})");
            }
            out.push('\n');
            for t in &op.tables {
                render_table(&mut out, t);
            }
            for v in &op.verdicts {
                let _ = write!(out, "  [{}] {}", if v.passed { "pass" } else { "FAIL" }, v.name);
                if !v.detail.is_empty() {
                    let _ = write!(out, ": {}", v.detail);
                }
                out.push('\n');
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\nsummary: {} operations, {} verdicts, {} failed: {}",
            s.operations,
            s.verdicts,
            s.failed,
            if s.failed == 0 { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn render_table(out: &mut String, t: &DimTable) {
    let qs: Vec<String> = (0..t.dims.len()).map(|i| (t.lo + i as i32).to_string()).collect();
    let ds: Vec<String> = t.dims.iter().map(usize::to_string).collect();
    let w = qs.iter().chain(&ds).map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "  {}", t.title);
    let _ = write!(out, "    q   ");
    for q in &qs {
        let _ = write!(out, " {q:>w$}");
    }
    let _ = write!(out, "\n    dim ");
    for d in &ds {
        let _ = write!(out, " {d:>w$}");
    }
    out.push('\n');
}
