//! Run reports: the certificates of one invocation plus provenance.

use serde_json::{json, Map, Value};

use crate::model::NetConfig;
use crate::verifier::Certificate;

/// Attached to every report.
pub const SIGN_DISCREPANCY_NOTE: &str = "the K0 anchor is E1 + f = E1 - K/2 = 2H - E2 - ... - E8, \
which is nef; the opposite sign E1 + K/2 has negative H-coefficient and is not used";

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: NetConfig,
    pub seed: u64,
    pub certificates: Vec<Certificate>,
    /// Free-form output of one-shot queries.
    pub result: Option<Value>,
    pub timings: bool,
}

fn witness(certs: &[Certificate], claim: &str, key: &str) -> Value {
    certs
        .iter()
        .find(|c| c.claim_id == claim)
        .and_then(|c| c.witnesses.get(key).cloned())
        .unwrap_or(Value::Null)
}

impl Report {
    pub fn new(command: &str, config: &NetConfig, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            config: config.clone(),
            seed,
            certificates: Vec::new(),
            result: None,
            timings: false,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn regression_values(&self) -> Value {
        let c = &self.certificates;
        json!({
            "curv_slice_ray_count": witness(c, "curv_cone", "slice_ray_count"),
            "u_est_size": witness(c, "covering", "u_est_size"),
            "symmetry_order": witness(c, "nef_symmetries", "order"),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), json!("netcone"));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(self.command));
        m.insert("config".into(), self.config.to_json());
        m.insert("seed".into(), json!(self.seed));
        if let Some(r) = &self.result {
            m.insert("result".into(), r.clone());
        }
        m.insert(
            "certificates".into(),
            Value::Array(self.certificates.iter().map(|c| c.to_json(self.timings)).collect()),
        );
        m.insert("regression_values".into(), self.regression_values());
        m.insert("warnings".into(), json!([SIGN_DISCREPANCY_NOTE]));
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# netcone {} report\n\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("- command: `{}`\n", self.command));
        out.push_str(&format!("- seed: {}\n", self.seed));
        out.push_str(&format!("- config: `{}`\n", self.config.to_json()));
        if let Some(r) = &self.result {
            out.push_str("\n## Result\n\n");
            out.push_str(&fenced(r));
        }
        if !self.certificates.is_empty() {
            out.push_str("\n## Certificates\n\n| claim | status |");
            if self.timings {
                out.push_str(" ms |\n|---|---|---|\n");
            } else {
                out.push_str("\n|---|---|\n");
            }
            for c in &self.certificates {
                let status = if c.passed() { "pass" } else { "FAIL" };
                out.push_str(&format!("| {} | {status} |", c.claim_id));
                if self.timings {
                    out.push_str(&format!(" {} |", c.runtime_ms));
                }
                out.push('\n');
            }
            for c in &self.certificates {
                out.push_str(&format!("\n### {}\n\n", c.claim_id));
                out.push_str(&fenced(&c.witnesses));
            }
        }
        out.push_str("\n## Regression values\n\n");
        if let Value::Object(m) = self.regression_values() {
            for (k, v) in m {
                out.push_str(&format!("- {k}: {v}\n"));
            }
        }
        out.push_str(&format!("\n## Warnings\n\n- {SIGN_DISCREPANCY_NOTE}\n"));
        out
    }
}

fn fenced(v: &Value) -> String {
    format!(
        "```json\n{}\n```\n",
        serde_json::to_string_pretty(v).expect("value serializes")
    )
}
