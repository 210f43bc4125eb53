use std::fmt;

use serde::Serialize;

use crate::bigraded::Bideg;

/// Maximum number of failures kept in a report.
pub const MAX_LISTED: usize = 16;

/// A single failed relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Which relation failed, e.g. `"A_{3,1}"` or `"m=2"`.
    pub relation: String,
    /// Source bidegree of the offending block, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<Bideg>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Outcome of a verification: a verdict plus the first few failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub ok: bool,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            ok: true,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn fail(&mut self, relation: impl Into<String>, bidegree: Option<Bideg>, detail: impl Into<String>) {
        self.ok = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED {
            self.failures.push(Failure {
                relation: relation.into(),
                bidegree,
                detail: detail.into(),
            });
        }
    }

    /// Folds another report in, prefixing its relations.
    pub fn absorb(&mut self, prefix: &str, other: &Report) {
        for f in &other.failures {
            self.fail(format!("{prefix}{}", f.relation), f.bidegree, f.detail.clone());
        }
        let hidden = other.failure_count - other.failures.len();
        self.failure_count += hidden;
        if hidden > 0 {
            self.ok = false;
        }
    }

    /// Relation names in the order they were recorded.
    pub fn failed_relations(&self) -> Vec<&str> {
        self.failures.iter().map(|f| f.relation.as_str()).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "{}: ok", self.check);
        }
        write!(f, "{}: {} failure(s)", self.check, self.failure_count)?;
        for x in &self.failures {
            write!(f, "\n  {}", x.relation)?;
            if let Some(b) = x.bidegree {
                write!(f, " at {b}")?;
            }
            if !x.detail.is_empty() {
                write!(f, ": {}", x.detail)?;
            }
        }
        Ok(())
    }
}
