//! Tester verdicts with machine-readable diagnostics.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn accepted(self) -> bool {
        self == Decision::Accept
    }
}

/// Accept/Reject plus named statistics. Diagnostics always carry the final
/// query count and every threshold the decision compared against.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub diagnostics: Map<String, Value>,
}

impl Verdict {
    pub fn new(decision: Decision) -> Self {
        Verdict {
            decision,
            diagnostics: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_owned(), value.into());
        self
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.diagnostics.insert(key.to_owned(), value.into());
    }

    pub fn f64(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).and_then(Value::as_f64)
    }

    pub fn u64(&self, key: &str) -> Option<u64> {
        self.diagnostics.get(key).and_then(Value::as_u64)
    }
}
