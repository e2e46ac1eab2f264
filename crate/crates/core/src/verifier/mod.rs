//! Executable certificates. Each check returns a [`Certificate`] whose
//! witnesses are exact: integers, `[num, den]` pairs and class strings.

mod covering;
mod curv;
mod effectivity;
mod k0;
mod knegative;
mod symmetries;

pub use covering::{
    covering_experiment, k0_shift, sample_movable, saturation_check, Classification,
    CoveringOutcome, CoveringParams, SampleRecord,
};
pub use curv::{
    curv_cone, matches_slice_pattern, nef_cone, slice_cone, slice_cone_with_exceptionals,
    verify_curv_cone, CurvData,
};
pub use effectivity::{verify_effectivity, verify_effectivity_on_nef_rays};
pub use k0::{build_k0, verify_k0, K0Cone, K0Vertex};
pub use knegative::{k_negative_rays, single_flop_states, verify_k_negative_bound, walk_states};
pub use symmetries::{nef_symmetries, symmetry_group, SymmetryGroup};

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub claim_id: String,
    pub status: Status,
    pub witnesses: Value,
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("certificate serializes");
        if timings {
            v["runtime_ms"] = Value::from(self.runtime_ms);
        }
        v
    }
}

/// Runs `body`, which reports its status and witnesses, and stamps the
/// elapsed time.
pub fn timed(claim_id: &str, body: impl FnOnce() -> (bool, Value)) -> Certificate {
    let start = Instant::now();
    let (ok, witnesses) = body();
    Certificate {
        claim_id: claim_id.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        witnesses,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn error_certificate(claim_id: &str, err: &crate::Error) -> Certificate {
    Certificate {
        claim_id: claim_id.to_string(),
        status: Status::Fail,
        witnesses: serde_json::json!({ "error": err.to_string() }),
        runtime_ms: 0,
    }
}
