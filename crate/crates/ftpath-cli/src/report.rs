//! Machine-readable run reports: one JSON object per run on stdout, a
//! human summary on stderr. Identical inputs and flags give identical
//! reports except for the wall-time field.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use ftpath_core::ftp::Answer;
use ftpath_core::ftp::{Parameters, Verdict};
use ftpath_core::graph::ExtCost;

/// First 16 hex characters of the SHA-256 of the canonical instance text.
pub fn digest(canonical_text: &str) -> String {
    let hash = Sha256::digest(canonical_text.as_bytes());
    hash.iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect::<String>()
}

pub struct RunReport {
    fields: Map<String, Value>,
    wall_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, instance_digest: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert("instance".into(), json!(instance_digest));
        RunReport {
            fields,
            wall_ms: 0.0,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn set_wall_ms(&mut self, wall_ms: f64) -> &mut Self {
        self.wall_ms = wall_ms;
        self
    }

    /// The JSON object, with the volatile wall-time field appended last.
    pub fn to_json(&self) -> Value {
        let mut fields = self.fields.clone();
        fields.insert("wall_ms".into(), json!(self.wall_ms));
        Value::Object(fields)
    }
}

pub fn ext_cost_json(value: ExtCost) -> Value {
    match value {
        ExtCost::Finite(c) => json!(c),
        ExtCost::Infinite => json!("inf"),
    }
}

pub fn verdict_json(verdict: &Verdict) -> Value {
    json!({
        "answer": match verdict.answer { Answer::Yes => "yes", Answer::No => "no" },
        "witness": verdict
            .witness
            .as_ref()
            .map(|w| w.ids().iter().map(|id| id.0).collect::<Vec<_>>()),
        "cost": verdict.witness_cost,
        "provenance": verdict.provenance.as_str(),
    })
}

pub fn parameters_json(params: &Parameters) -> Value {
    json!({
        "dist": ext_cost_json(params.dist),
        "C": ext_cost_json(params.relaxation),
        "a": params.a,
        "b": params.b,
        "p": params.p,
        "q": params.q,
        "opt": params.opt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("ftp directed 2 1\n"), digest("ftp directed 2 1\n"));
        assert_ne!(digest("a"), digest("b"));
        assert_eq!(digest("x").len(), 16);
    }

    #[test]
    fn report_keys_are_sorted_and_wall_time_is_separate() {
        let mut report = RunReport::new("solve", "abc");
        report.set("zeta", json!(1)).set("alpha", json!(2));
        report.set_wall_ms(12.5);
        let a = report.to_json().to_string();
        report.set_wall_ms(99.0);
        let b = report.to_json().to_string();
        assert_ne!(a, b);
        assert_eq!(
            a.replace("12.5", "0"),
            b.replace("99.0", "0"),
            "only wall time differs"
        );
    }
}
