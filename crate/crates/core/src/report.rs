//! Structured results shared by the law suite and the command-line tool.

use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub law: String,
    /// What was quantified over, e.g. `mo2, all pairs`.
    pub scope: String,
    pub result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(law: impl Into<String>, scope: impl Into<String>) -> Check {
        Check {
            law: law.into(),
            scope: scope.into(),
            result: true,
            witness: None,
        }
    }

    pub fn fail(law: impl Into<String>, scope: impl Into<String>, witness: impl Into<String>) -> Check {
        Check {
            law: law.into(),
            scope: scope.into(),
            result: false,
            witness: Some(witness.into()),
        }
    }

    /// `Ok(())` passes; `Err(w)` fails with witness `w`.
    pub fn from_result(law: impl Into<String>, scope: impl Into<String>, r: Result<(), String>) -> Check {
        match r {
            Ok(()) => Check::pass(law, scope),
            Err(w) => Check::fail(law, scope, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    /// Status is `pass` exactly when every check passes.
    pub fn new(command: impl Into<String>, checks: Vec<Check>) -> Report {
        let status = if checks.iter().all(|c| c.result) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            command: command.into(),
            status,
            checks,
            timing_ms: None,
        }
    }

    pub fn error(command: impl Into<String>, message: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            status: Status::Error,
            checks: vec![Check {
                law: "input".into(),
                scope: String::new(),
                result: false,
                witness: Some(message.into()),
            }],
            timing_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.result)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.result { "ok  " } else { "FAIL" };
            s.push_str(&format!("{mark} {} [{}]", c.law, c.scope));
            if let Some(w) = &c.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.result).count();
        s.push_str(&format!(
            "{}: {} ({passed}/{} checks passed)",
            self.command,
            match self.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Error => "error",
            },
            self.checks.len()
        ));
        if let Some(t) = self.timing_ms {
            s.push_str(&format!(" in {t} ms"));
        }
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let r = Report::new("x", vec![Check::pass("a", "s"), Check::pass("b", "s")]);
        assert!(r.passed());
        let r = Report::new("x", vec![Check::pass("a", "s"), Check::fail("b", "s", "w")]);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures().count(), 1);
        assert!(r.to_text().contains("FAIL b [s]: w"));
    }
}
