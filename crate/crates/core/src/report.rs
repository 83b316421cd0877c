//! Pass/fail records shared by every verification suite.

use serde::Serialize;

pub const SCHEMA: &str = "qserre-lab/1";

/// Residuals are cut to this many printed terms.
pub const RESIDUAL_TERMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub instances: Vec<Instance>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), instances: Vec::new() }
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.instances.push(Instance { id: id.into(), pass: true, residual: None });
    }

    pub fn fail(&mut self, id: impl Into<String>, residual: impl Into<String>) {
        self.instances.push(Instance { id: id.into(), pass: false, residual: Some(residual.into()) });
    }

    /// Records a pass when `residual` is `None`.
    pub fn record(&mut self, id: impl Into<String>, residual: Option<String>) {
        match residual {
            None => self.pass(id),
            Some(r) => self.fail(id, r),
        }
    }

    pub fn check(&mut self, id: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(id)
        } else {
            self.fail(id, detail())
        }
    }

    /// Appends another report's instances with its suite name as prefix.
    pub fn absorb(&mut self, other: Report) {
        for mut i in other.instances {
            i.id = format!("{}/{}", other.suite, i.id);
            self.instances.push(i);
        }
    }

    pub fn summary(&self) -> Summary {
        let passed = self.instances.iter().filter(|i| i.pass).count();
        Summary { total: self.instances.len(), passed, failed: self.instances.len() - passed }
    }

    pub fn all_pass(&self) -> bool {
        self.instances.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.pass)
    }

    pub fn first_failure(&self) -> Option<&Instance> {
        self.failures().next()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": SCHEMA,
            "suite": self.suite,
            "instances": self.instances,
            "summary": self.summary(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let mut r = Report::new("demo");
        r.pass("a");
        r.fail("b", "x");
        r.record("c", None);
        assert_eq!(r.summary(), Summary { total: 3, passed: 2, failed: 1 });
        assert!(!r.all_pass());
        assert_eq!(r.first_failure().unwrap().id, "b");
        let j = r.to_json();
        assert_eq!(j["schema"], SCHEMA);
        assert!(j["instances"][0].get("residual").is_none());
    }
}
