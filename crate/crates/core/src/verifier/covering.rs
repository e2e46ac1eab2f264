use std::collections::{BTreeMap, HashMap};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::k0::K0Cone;
use super::{timed, Certificate};
use crate::arith::rational_json;
use crate::chambers::{
    initial_chamber, is_nef_on, mw_transport, nefify, ChamberKey, ChamberState, FlopWord,
};
use crate::error::{Error, Result};
use crate::model::{DivisorClass, NetConfig, POINTS};
use crate::mw::{act, normalize_to_pi, MWElement};
use crate::Rational;

#[derive(Clone, Copy, Debug)]
pub struct CoveringParams {
    pub samples: usize,
    pub coefficient_bound: i64,
    pub seed: u64,
    pub max_flops: usize,
    pub spot_checks: usize,
}

impl Default for CoveringParams {
    fn default() -> Self {
        CoveringParams {
            samples: 1000,
            coefficient_bound: 20,
            seed: 42,
            max_flops: 10_000,
            spot_checks: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    /// `D′ ∈ K₀`; `shift` is the least `t` with `D′ + t·f ∈ K₀`.
    InK0 { shift: Rational },
    /// Terminal chamber of `nefify(D′)`.
    Chamber { key: ChamberKey, word: FlopWord },
    Failed(Error),
}

#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub class: DivisorClass,
    pub translation: Option<MWElement>,
    pub normalized: Option<DivisorClass>,
    pub classification: Classification,
}

#[derive(Clone, Debug)]
pub struct CoveringOutcome {
    pub records: Vec<SampleRecord>,
    /// Distinct terminal chambers, in order of first appearance.
    pub chambers: Vec<ChamberState>,
}

impl CoveringOutcome {
    pub fn chamber_keys(&self) -> Vec<ChamberKey> {
        self.chambers.iter().map(ChamberState::key).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SampleRecord> {
        self.records
            .iter()
            .filter(|r| matches!(r.classification, Classification::Failed(_)))
    }
}

/// Integral `D = aH + ΣcᵢEᵢ` with `|a| ≤ b`, `−b ≤ cᵢ ≤ 0` and `D·F > 0`.
///
/// `cᵢ ≤ 0` is `D·lᵢ ≥ 0`: a movable class cannot be negative on curves
/// sweeping out a divisor.
pub fn sample_movable<R: Rng>(rng: &mut R, bound: i64) -> DivisorClass {
    loop {
        let a = rng.gen_range(-bound..=bound);
        let c: [i64; POINTS] = std::array::from_fn(|_| rng.gen_range(-bound..=0));
        if 4 * a + c.iter().sum::<i64>() > 0 {
            return DivisorClass::from_ints(a, c);
        }
    }
}

/// `Some(t_min)` when some shift `D + t·f` lies in K₀.
pub fn k0_shift(k0: &K0Cone, d: &DivisorClass) -> Option<Rational> {
    k0.min_shift(d)
}

struct Classified {
    record: SampleRecord,
    terminal: Option<ChamberState>,
}

fn classify(d: &DivisorClass, k0: &K0Cone, config: &NetConfig, max_flops: usize) -> Classified {
    let fail = |e: Error, y: Option<MWElement>, dn: Option<DivisorClass>| Classified {
        record: SampleRecord {
            class: d.clone(),
            translation: y,
            normalized: dn,
            classification: Classification::Failed(e),
        },
        terminal: None,
    };
    let (y, dn) = match normalize_to_pi(d) {
        Ok(v) => v,
        Err(e) => return fail(e, None, None),
    };
    if let Some(t) = k0_shift(k0, &dn) {
        if !t.is_positive() {
            return Classified {
                record: SampleRecord {
                    class: d.clone(),
                    translation: Some(y),
                    normalized: Some(dn),
                    classification: Classification::InK0 { shift: t },
                },
                terminal: None,
            };
        }
    }
    match nefify(&dn, config, max_flops) {
        Ok(out) => {
            debug_assert!(is_nef_on(&dn, &out.state));
            Classified {
                record: SampleRecord {
                    class: d.clone(),
                    translation: Some(y),
                    normalized: Some(dn),
                    classification: Classification::Chamber {
                        key: out.state.key(),
                        word: out.word,
                    },
                },
                terminal: Some(out.state),
            }
        }
        Err(e) => fail(e, Some(y), Some(dn)),
    }
}

fn record_json(r: &SampleRecord) -> Value {
    let mut v = json!({
        "class": r.class.to_string(),
        "translation": r.translation,
        "normalized": r.normalized.as_ref().map(|d| d.to_string()),
    });
    match &r.classification {
        Classification::InK0 { shift } => {
            v["kind"] = json!("k0");
            v["shift"] = rational_json(shift);
        }
        Classification::Chamber { word, .. } => {
            v["kind"] = json!("chamber");
            v["flops"] = json!(word.len());
        }
        Classification::Failed(e) => {
            v["kind"] = json!("failed");
            v["error"] = json!(e.to_string());
        }
    }
    v
}

pub fn covering_experiment(
    config: &NetConfig,
    k0: &K0Cone,
    params: &CoveringParams,
) -> Result<(CoveringOutcome, Certificate)> {
    initial_chamber(config)?;
    let mut outcome = None;
    let cert = timed("covering", || {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let samples: Vec<DivisorClass> = (0..params.samples)
            .map(|_| sample_movable(&mut rng, params.coefficient_bound))
            .collect();
        let classified: Vec<Classified> = samples
            .par_iter()
            .map(|d| classify(d, k0, config, params.max_flops))
            .collect();

        let mut index: HashMap<ChamberKey, usize> = HashMap::new();
        let mut chambers: Vec<ChamberState> = Vec::new();
        let mut hits: Vec<usize> = Vec::new();
        let mut records = Vec::with_capacity(classified.len());
        for c in classified {
            if let Some(state) = c.terminal {
                let key = state.key();
                let next = chambers.len();
                let slot = *index.entry(key).or_insert(next);
                if slot == next {
                    chambers.push(state);
                    hits.push(0);
                }
                hits[slot] += 1;
            }
            records.push(c.record);
        }

        let in_k0 = records
            .iter()
            .filter(|r| matches!(r.classification, Classification::InK0 { .. }))
            .count();
        let failures: Vec<Value> = records
            .iter()
            .filter(|r| matches!(r.classification, Classification::Failed(_)))
            .map(record_json)
            .collect();
        let max_flops_used = records
            .iter()
            .filter_map(|r| match &r.classification {
                Classification::Chamber { word, .. } => Some(word.len()),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let mut failure_kinds: BTreeMap<String, usize> = BTreeMap::new();
        for r in &records {
            if let Classification::Failed(e) = &r.classification {
                let kind = match e {
                    Error::NegativeOnExceptionalLine(_) => "negative_on_exceptional_line",
                    Error::BudgetExhausted(_) => "budget_exhausted",
                    Error::NotRelativelyMovable => "not_relatively_movable",
                    _ => "other",
                };
                *failure_kinds.entry(kind.to_string()).or_default() += 1;
            }
        }

        let spot = pretranslation_checks(&records, &chambers, &index, k0, config, params);

        let witnesses = json!({
            "samples": records.len(),
            "seed": params.seed,
            "coefficient_bound": params.coefficient_bound,
            "in_k0": in_k0,
            "in_chambers": records.len() - in_k0 - failures.len(),
            "u_est_size": chambers.len(),
            "max_flops_used": max_flops_used,
            "chambers": chambers.iter().zip(&hits).map(|(s, h)| json!({
                "flop_word": s.flop_word,
                "samples": h,
            })).collect::<Vec<_>>(),
            "failure_counts": failure_kinds,
            "failures": failures.iter().take(20).cloned().collect::<Vec<_>>(),
            "pretranslation": spot.0,
        });
        outcome = Some(CoveringOutcome { records, chambers });
        (failures.is_empty() && spot.1, witnesses)
    });
    Ok((outcome.expect("experiment ran"), cert))
}

/// Classifies `act(y, D)` for random `y` and compares with the class of `D`.
/// Normalization makes the terminal chamber identical; whether it also
/// equals `mw_transport(chamber, y)` is reported alongside.
fn pretranslation_checks(
    records: &[SampleRecord],
    chambers: &[ChamberState],
    index: &HashMap<ChamberKey, usize>,
    k0: &K0Cone,
    config: &NetConfig,
    params: &CoveringParams,
) -> (Value, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed);
    let mut same = 0;
    let mut transported_equal = 0;
    let mut transport_errors = 0;
    let mut mismatches = Vec::new();
    let picked: Vec<&SampleRecord> = records
        .iter()
        .filter(|r| !matches!(r.classification, Classification::Failed(_)))
        .take(params.spot_checks)
        .collect();
    for r in &picked {
        let y = MWElement::new(std::array::from_fn(|_| rng.gen_range(-3..=3)));
        let moved = act(&y, &r.class);
        let c = classify(&moved, k0, config, params.max_flops);
        let agree = match (&r.classification, &c.record.classification) {
            (Classification::InK0 { shift: a }, Classification::InK0 { shift: b }) => a == b,
            (Classification::Chamber { key: a, .. }, Classification::Chamber { key: b, .. }) => a == b,
            _ => false,
        };
        if agree {
            same += 1;
        } else {
            mismatches.push(json!({"class": r.class.to_string(), "y": y}));
        }
        if let Classification::Chamber { key, .. } = &r.classification {
            match mw_transport(&chambers[index[key]], &y) {
                Ok(t) if &t.key() == key => transported_equal += 1,
                Ok(_) => {}
                Err(_) => transport_errors += 1,
            }
        }
    }
    let chamber_checks = picked
        .iter()
        .filter(|r| matches!(r.classification, Classification::Chamber { .. }))
        .count();
    (
        json!({
            "checks": picked.len(),
            "same_classification": same,
            "chamber_checks": chamber_checks,
            "equal_to_transported_chamber": transported_equal,
            "transport_errors": transport_errors,
            "mismatches": mismatches,
        }),
        mismatches.is_empty(),
    )
}

/// Compares two runs: both must classify every sample, and the second run's
/// chambers are split into ones already seen and newly discovered.
pub fn saturation_check(first: &CoveringOutcome, second: &CoveringOutcome) -> Certificate {
    timed("covering_saturation", || {
        let a: std::collections::HashSet<ChamberKey> = first.chamber_keys().into_iter().collect();
        let b: std::collections::HashSet<ChamberKey> = second.chamber_keys().into_iter().collect();
        let union = a.union(&b).count();
        let new = b.difference(&a).count();
        let classified = first.failures().next().is_none() && second.failures().next().is_none();
        let consistent = union == a.len() + new && union >= a.len().max(b.len());
        (
            classified && consistent,
            json!({
                "first_size": a.len(),
                "second_size": b.len(),
                "union_size": union,
                "newly_discovered": new,
                "all_classified": classified,
            }),
        )
    })
}
