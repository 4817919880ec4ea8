//! Reports written by every subcommand: a markdown page for reading and a
//! JSON document for tools, both rendered from the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use incidence::simplicial::CheckResult;
use incidence::Error;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

/// Why a command stopped before its checks could run.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::Malformed(_) => "malformed",
            Error::TruncationExceeded { .. } => "truncation-exceeded",
            Error::ZeroDimension => "zero-dimension",
            Error::UndefinedProduct { .. } => "undefined-product",
            Error::ClosureEscape { .. } => "closure-escape",
            Error::AxiomViolation { .. } => "axiom-violation",
            Error::ExactnessNotCertified { .. } => "exactness-not-certified",
            Error::HypothesisFailed { .. } => "hypothesis-failed",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::MissingMonoidal => "missing-monoidal",
            Error::NotSetLevel => "not-set-level",
            Error::UnknownBasis(_) => "unknown-basis",
            Error::Json(_) => "json",
        };
        Failure { kind: kind.into(), message: e.to_string() }
    }
}

/// Errors caused by the input rather than by a failed check.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Malformed(_)
            | Error::Json(_)
            | Error::UnknownBasis(_)
            | Error::TruncationExceeded { .. }
            | Error::ZeroDimension
            | Error::MissingMonoidal
            | Error::NotSetLevel
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub space: String,
    pub passed: bool,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub tables: Vec<Table>,
    pub failure: Option<Failure>,
}

impl Report {
    pub fn new(command: &str, space: &str) -> Self {
        Report {
            command: command.into(),
            space: space.into(),
            passed: true,
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            failure: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn check(&mut self, c: CheckResult) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn fail(&mut self, e: &Error) {
        self.passed = false;
        self.failure = Some(Failure::from_error(e));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        let _ = writeln!(md, "# incidence {}\n", self.command);
        let _ = writeln!(md, "- space: `{}`", self.space);
        for (k, v) in &self.parameters {
            let _ = writeln!(md, "- {k}: `{v}`");
        }
        let _ = writeln!(md, "- result: **{}**\n", if self.passed { "pass" } else { "fail" });
        if let Some(f) = &self.failure {
            let _ = writeln!(md, "## Failure\n\n- kind: `{}`\n- message: {}\n", f.kind, f.message);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(md, "## Checks\n");
            for c in &self.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(md, "- [{mark}] {} ({} checked)", c.name, c.checked);
                for w in &c.witnesses {
                    let _ = writeln!(md, "  - witness: {w}");
                }
            }
            md.push('\n');
        }
        for t in &self.tables {
            let _ = writeln!(md, "## {}\n", t.title);
            let _ = writeln!(md, "| {} |", t.columns.join(" | "));
            let _ = writeln!(md, "|{}", "---|".repeat(t.columns.len()));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(md, "| {} |", cells.join(" | "));
            }
            md.push('\n');
        }
        md
    }

    /// Writes `<command>.md` and `<command>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let md = dir.join(format!("{}.md", self.command));
        let json = dir.join(format!("{}.json", self.command));
        fs::write(&md, self.to_markdown()).with_context(|| format!("writing {}", md.display()))?;
        fs::write(&json, self.to_json()).with_context(|| format!("writing {}", json.display()))?;
        Ok((md, json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_fail_the_report() {
        let mut r = Report::new("validate", "toy");
        r.check(CheckResult::new("ok"));
        assert!(r.passed);
        let mut bad = CheckResult::new("bad");
        bad.fail("here".into());
        r.check(bad);
        assert!(!r.passed);
        assert!(r.to_markdown().contains("witness: here"));
    }

    #[test]
    fn markdown_escapes_pipes_in_cells() {
        let mut r = Report::new("build", "toy");
        let mut t = Table::new("cells", &["a"]);
        t.row(vec!["x|y".into()]);
        r.table(t);
        assert!(r.to_markdown().contains("x\\|y"));
    }
}
