use num_traits::Signed;
use serde_json::{json, Value};

use super::{timed, Certificate};
use crate::arith::{rational_json, Rational};
use crate::chambers::{is_nef_on, ChamberState};
use crate::model::{pair, triple, CurveClass, DivisorClass};

fn is_multiple_of_f(d: &DivisorClass) -> bool {
    // f = (2; −1, …, −1)
    d.c.iter().all(|c| *c == d.c[0]) && d.a == -(&d.c[0] * Rational::from_integer(2.into()))
}

/// One pass of the bigness chain for `D` nef on `state`.
fn chain(d: &DivisorClass, state: &ChamberState) -> (bool, Value) {
    let f = DivisorClass::anti_half_canonical();
    let nef = is_nef_on(d, state);
    let cube = triple(d, d, d);
    let dff = triple(d, d, &f);
    let degree = pair(d, &CurveClass::fiber());
    let multiple = is_multiple_of_f(d);
    let shifted = d + &f;
    let big = triple(&shifted, &shifted, &shifted);
    let ok = nef
        && !cube.is_negative()
        && !dff.is_negative()
        && (degree.is_positive() || multiple)
        && (multiple || big.is_positive());
    (
        ok,
        json!({
            "class": d.to_string(),
            "nef": nef,
            "cube": rational_json(&cube),
            "d_d_f": rational_json(&dff),
            "fibre_degree": rational_json(&degree),
            "multiple_of_f": multiple,
            "shifted_cube": rational_json(&big),
        }),
    )
}

pub fn verify_effectivity(d: &DivisorClass, state: &ChamberState) -> Certificate {
    timed("effectivity", || chain(d, state))
}

/// Runs the chain on every ray of a chamber cone.
pub fn verify_effectivity_on_nef_rays(rays: &[DivisorClass], state: &ChamberState) -> Certificate {
    timed("effectivity_nef_rays", || {
        let mut failures = Vec::new();
        let mut multiples = 0;
        for d in rays {
            let (ok, w) = chain(d, state);
            if is_multiple_of_f(d) {
                multiples += 1;
            }
            if !ok {
                failures.push(w);
            }
        }
        let zero_rays = rays.iter().filter(|d| d.is_zero()).count();
        (
            failures.is_empty() && zero_rays == 0 && !rays.is_empty(),
            json!({
                "rays_checked": rays.len(),
                "multiples_of_f": multiples,
                "failures": failures,
            }),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::chambers::initial_chamber;
    use crate::model::NetConfig;

    #[test]
    fn anchors() {
        let s = initial_chamber(&NetConfig::generic()).unwrap();
        let f = DivisorClass::anti_half_canonical();
        assert!(verify_effectivity(&f, &s).passed());
        assert!(is_multiple_of_f(&f.scale(&rat(3))));
        assert!(!is_multiple_of_f(&DivisorClass::h()));
        let anchor = &DivisorClass::exceptional(1).unwrap() + &f;
        let cert = verify_effectivity(&anchor, &s);
        assert!(cert.passed());
        // (E₁ + 2f)³ = 4³ − 1 − 7·8
        assert_eq!(cert.witnesses["shifted_cube"], serde_json::json!([7, 1]));
        assert_eq!(cert.witnesses["fibre_degree"], serde_json::json!([1, 1]));
    }

    #[test]
    fn non_nef_class_fails() {
        let s = initial_chamber(&NetConfig::generic()).unwrap();
        let d12 = DivisorClass::plane_through(1, 2).unwrap();
        assert!(!verify_effectivity(&d12, &s).passed());
    }
}
