use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{timed, Certificate};
use crate::arith::rational_json;
use crate::chambers::{
    chamber_curve_cone, flop, initial_chamber, random_walk, vanishing_combination, word_string,
    ChamberState, FiberId, Slot,
};
use crate::error::{Error, Result};
use crate::model::{pair, CurveClass, DivisorClass, NetConfig};

/// Extremal rays of the chamber's curve cone with negative canonical degree.
pub fn k_negative_rays(s: &ChamberState) -> Result<Vec<CurveClass>> {
    let cone = chamber_curve_cone(s)?;
    if !cone.is_pointed() {
        return Err(Error::InconsistentChamber(format!(
            "curve cone contains a line after flops {}",
            word_string(&s.flop_word)
        )));
    }
    let k = DivisorClass::canonical();
    Ok(cone
        .generators()
        .iter()
        .map(|g| CurveClass::from_int_coords(g))
        .filter(|g| pair(&k, g).is_negative())
        .collect())
}

/// The 56 chambers one flop away from the initial one.
pub fn single_flop_states() -> Vec<ChamberState> {
    let start = initial_chamber(&NetConfig::generic()).expect("generic net has rank 7");
    FiberId::all()
        .into_iter()
        .flat_map(|id| [Slot::Line, Slot::Residual].map(|slot| flop(&start, id, slot)))
        .collect()
}

/// `count` random walks of length `1..=max_len` through full-dimensional
/// chambers.
pub fn walk_states(count: usize, max_len: usize, seed: u64) -> Vec<ChamberState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_walk(&mut rng, len)
        })
        .collect()
}

pub fn verify_k_negative_bound(states: &[ChamberState]) -> Certificate {
    timed("k_negative_bound", || {
        let mut counts = Vec::with_capacity(states.len());
        let mut failures: Vec<Value> = Vec::new();
        for s in states {
            match k_negative_rays(s) {
                Ok(rays) => {
                    if rays.len() > 8 {
                        failures.push(json!({
                            "flop_word": s.flop_word,
                            "rays": rays.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                        }));
                    }
                    counts.push(Value::from(rays.len()));
                }
                Err(e) => {
                    let gens = s.int_generators();
                    let witness = vanishing_combination(&gens).map(|lambda| {
                        s.curve_generators()
                            .iter()
                            .zip(&lambda)
                            .filter(|(_, v)| v.is_positive())
                            .map(|(g, v)| json!({"curve": g.to_string(), "coeff": rational_json(v)}))
                            .collect::<Vec<_>>()
                    });
                    failures.push(json!({
                        "flop_word": s.flop_word,
                        "error": e.to_string(),
                        "vanishing_combination": witness,
                    }));
                    counts.push(Value::Null);
                }
            }
        }
        (
            failures.is_empty(),
            json!({
                "states": states.len(),
                "k_negative_counts": counts,
                "failures": failures,
            }),
        )
    })
}
