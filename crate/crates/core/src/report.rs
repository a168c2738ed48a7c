//! Structured pass/fail results shared by every checker.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        };
        f.write_str(s)
    }
}

/// First failing instance of a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub location: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    pub status: Status,
    pub instances: usize,
    pub failures: usize,
    /// Relation tags with at least one failure, in first-seen order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_tags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, serde_json::Value>,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckReport {
            check_id: check_id.into(),
            anchor: anchor.into(),
            spec: None,
            zeta: None,
            status: Status::Pass,
            instances: 0,
            failures: 0,
            failed_tags: Vec::new(),
            witness: None,
            info: BTreeMap::new(),
        }
    }

    pub fn with_spec(mut self, name: impl Into<String>) -> Self {
        self.spec = Some(name.into());
        self
    }

    pub fn with_zeta(mut self, z: impl fmt::Display) -> Self {
        self.zeta = Some(z.to_string());
        self
    }

    pub fn set_info(&mut self, key: &str, v: impl Serialize) {
        self.info.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    /// Records one instance. The witness closure runs only on the first failure.
    pub fn record<F: FnOnce() -> (String, String)>(&mut self, tag: &str, ok: bool, witness: F) {
        self.instances += 1;
        if ok {
            return;
        }
        self.failures += 1;
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
        if !self.failed_tags.iter().any(|t| t == tag) {
            self.failed_tags.push(tag.to_string());
        }
        if self.witness.is_none() {
            let (location, value) = witness();
            self.witness = Some(Witness { location: format!("{tag}: {location}"), value });
        }
    }

    /// Marks the check as unable to run.
    pub fn error(&mut self, msg: impl Into<String>) {
        self.status = Status::Error;
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(Witness { location: "error".into(), value: msg.into() });
        }
    }

    /// Folds another report's instances into this one.
    pub fn absorb(&mut self, other: &CheckReport) {
        self.instances += other.instances;
        self.failures += other.failures;
        for t in &other.failed_tags {
            if !self.failed_tags.contains(t) {
                self.failed_tags.push(t.clone());
            }
        }
        if self.witness.is_none() {
            self.witness = other.witness.clone();
        }
        match (self.status, other.status) {
            (_, Status::Error) => self.status = Status::Error,
            (Status::Pass, Status::Fail) => self.status = Status::Fail,
            _ => {}
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed_tag(&self, tag: &str) -> bool {
        self.failed_tags.iter().any(|t| t == tag)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} ({} instances", self.status, self.check_id, self.instances)?;
        if self.failures > 0 {
            write!(f, ", {} failing", self.failures)?;
        }
        write!(f, ")")?;
        if let Some(w) = &self.witness {
            write!(f, " at {} = {}", w.location, w.value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_absorb() {
        let mut a = CheckReport::new("x", "eq X");
        a.record("r1", true, || unreachable!());
        assert!(a.passed());
        a.record("r2", false, || ("i=0".into(), "1".into()));
        a.record("r2", false, || ("i=1".into(), "2".into()));
        assert_eq!((a.instances, a.failures), (3, 2));
        assert_eq!(a.witness.as_ref().unwrap().location, "r2: i=0");
        let mut b = CheckReport::new("y", "eq Y");
        b.absorb(&a);
        assert!(b.failed_tag("r2") && !b.passed());
    }
}
