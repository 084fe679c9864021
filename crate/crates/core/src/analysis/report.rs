use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Outcome of one verification check.
///
/// Every check is phrased as a list of inequalities `lhs <= rhs`; the
/// violation of an item is `lhs - rhs` and `worst_violation` is the largest
/// of them. `pass` holds exactly when `worst_violation <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub pass: bool,
    pub tolerance: f64,
    pub worst_violation: f64,
    pub witness: Option<Value>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Accumulates items and keeps the worst one.
#[derive(Debug)]
pub(crate) struct Tally {
    check: String,
    tolerance: f64,
    params: Map<String, Value>,
    details: Map<String, Value>,
    worst: Option<(f64, Value)>,
    failed: Vec<Value>,
}

impl Tally {
    pub fn new(check: &str, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            tolerance,
            params: Map::new(),
            details: Map::new(),
            worst: None,
            failed: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Records `violation = lhs - rhs` for an item at `location`.
    pub fn item(&mut self, violation: f64, location: Value) {
        // NaN must never pass.
        let violation = if violation.is_nan() {
            f64::MAX
        } else {
            violation
        };
        if violation > self.tolerance && self.failed.len() < 16 {
            self.failed.push(location.clone());
        }
        match &self.worst {
            Some((w, _)) if *w >= violation => {}
            _ => self.worst = Some((violation, location)),
        }
    }

    pub fn finish(self) -> VerificationReport {
        let (worst, location) = self.worst.unwrap_or((0.0, Value::Null));
        let mut witness = self.details;
        witness.insert("worst_at".into(), location);
        if !self.failed.is_empty() {
            witness.insert("failed".into(), Value::Array(self.failed));
        }
        VerificationReport {
            check: self.check,
            params: self.params,
            pass: worst <= self.tolerance,
            tolerance: self.tolerance,
            worst_violation: worst,
            witness: Some(Value::Object(witness)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_iff_worst_within_tolerance() {
        let mut t = Tally::new("demo", 0.1);
        t.item(-1.0, json!({"i": 0}));
        t.item(0.05, json!({"i": 1}));
        let r = t.finish();
        assert!(r.pass);
        assert_eq!(r.worst_violation, 0.05);
        assert_eq!(r.witness.unwrap()["worst_at"], json!({"i": 1}));

        let mut t = Tally::new("demo", 0.0);
        t.item(f64::NAN, json!({}));
        assert!(!t.finish().pass);
    }

    #[test]
    fn schema_keys() {
        let mut t = Tally::new("demo", 1e-12);
        t.param("beta", 0.5);
        t.item(0.0, json!(null));
        let v: Value = serde_json::from_str(&t.finish().to_json()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "check",
                "params",
                "pass",
                "tolerance",
                "witness",
                "worst_violation"
            ]
        );
    }
}
