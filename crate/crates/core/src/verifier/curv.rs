use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::{timed, Certificate};
use crate::arith::{rat, rational_json, Rational};
use crate::chambers::{curve_to_normal, FiberId};
use crate::cone::lp::{LinearProgram, LpOutcome, Relation};
use crate::cone::Cone;
use crate::model::{pair, CurveClass, DivisorClass, N1_DIM, POINTS};

/// The 36 curve classes `l₁..l₈, C₁₂..C₇₈`.
pub(crate) fn curv_generators() -> Vec<CurveClass> {
    let mut gens: Vec<CurveClass> = (1..=POINTS)
        .map(|i| CurveClass::exceptional_line(i).expect("valid index"))
        .collect();
    gens.extend(
        FiberId::all()
            .into_iter()
            .map(|id| CurveClass::secant_line(id.0, id.1).expect("valid pair")),
    );
    gens
}

/// `cone(lᵢ, C_ij)` in curve coordinates.
pub fn curv_cone() -> Cone {
    let gens: Vec<Vec<BigInt>> = curv_generators().iter().map(CurveClass::int_coords).collect();
    Cone::from_int_generators(&gens, N1_DIM).expect("36 generators in dimension 9")
}

/// `{D : D·γ ≥ 0}` for the 36 generators, in divisor coordinates.
pub fn nef_cone() -> Cone {
    let normals: Vec<Vec<BigInt>> = curv_generators()
        .iter()
        .map(|g| curve_to_normal(&g.int_coords()))
        .collect();
    Cone::from_int_inequalities(&normals, N1_DIM).expect("36 inequalities in dimension 9")
}

/// `{C : D_ij·C ≥ 0 for all i<j, K·C = 0}` in curve coordinates.
pub fn slice_cone() -> Cone {
    let mut rows: Vec<Vec<BigInt>> = FiberId::all()
        .into_iter()
        .map(|id| {
            curve_to_normal(&DivisorClass::plane_through(id.0, id.1).expect("valid pair").int_coords())
        })
        .collect();
    let k = curve_to_normal(&DivisorClass::canonical().int_coords());
    rows.push(k.iter().map(|x| -x).collect());
    rows.push(k);
    Cone::from_int_inequalities(&rows, N1_DIM).expect("slice inequalities in dimension 9")
}

/// The slice cut down further by `Eᵢ·C ≥ 0`, which every irreducible
/// K-trivial curve satisfies since it lies in no `Eᵢ`.
pub fn slice_cone_with_exceptionals() -> Cone {
    let mut rows: Vec<Vec<BigInt>> = slice_cone().facets();
    rows.extend((1..=POINTS).map(|i| {
        curve_to_normal(&DivisorClass::exceptional(i).expect("valid index").int_coords())
    }));
    Cone::from_int_inequalities(&rows, N1_DIM).expect("slice inequalities in dimension 9")
}

/// Returns `n` if `g = n·l − (n−1)l_{i₁} − l_{i₂} − … − l_{i_{n+2}}` with
/// distinct indices and `2 ≤ n ≤ 6`.
pub fn matches_slice_pattern(g: &CurveClass) -> Option<usize> {
    if !g.is_integral() {
        return None;
    }
    let n = g.e.to_integer();
    if n < BigInt::from(2) || n > BigInt::from(6) {
        return None;
    }
    let big = -(&n - BigInt::one());
    let mut heavy = 0;
    let mut unit = 0;
    for d in &g.d {
        let d = d.to_integer();
        if d.is_zero() {
            continue;
        }
        if d == big && heavy == 0 {
            heavy += 1;
        } else if d == -BigInt::one() {
            unit += 1;
        } else {
            return None;
        }
    }
    let n = usize::try_from(n).ok()?;
    // for n = 2 the heavy coefficient is itself −1
    let ok = if n == 2 {
        heavy + unit == 4
    } else {
        heavy == 1 && unit == n + 1
    };
    ok.then_some(n)
}

/// Nonnegative coefficients on the 28 lines `C_ij` summing to `g`.
pub(crate) fn decompose_into_lines(g: &CurveClass) -> Option<Vec<(FiberId, Rational)>> {
    let ids = FiberId::all();
    let lines: Vec<CurveClass> = ids
        .iter()
        .map(|id| CurveClass::secant_line(id.0, id.1).expect("valid pair"))
        .collect();
    let target = g.coords();
    let mut lp = LinearProgram::new(lines.len());
    for k in 0..N1_DIM {
        let row = lines.iter().map(|c| c.coords()[k].clone()).collect();
        lp.add(row, Relation::Eq, target[k].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(
            ids.into_iter()
                .zip(x)
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        ),
        _ => None,
    }
}

pub(crate) fn decomposition_json(parts: &[(FiberId, Rational)]) -> Value {
    let mut m = Map::new();
    for (id, v) in parts {
        m.insert(format!("C{}{}", id.0, id.1), rational_json(v));
    }
    Value::Object(m)
}

pub struct CurvData {
    pub curv: Cone,
    pub nef: Cone,
    pub slice: Cone,
}

impl CurvData {
    pub fn compute() -> Self {
        CurvData {
            curv: curv_cone(),
            nef: nef_cone(),
            slice: slice_cone(),
        }
    }

    pub fn slice_rays(&self) -> Vec<CurveClass> {
        self.slice.generators().iter().map(|g| CurveClass::from_int_coords(g)).collect()
    }

    pub fn nef_rays(&self) -> Vec<DivisorClass> {
        self.nef.generators().iter().map(|g| DivisorClass::from_int_coords(g)).collect()
    }
}

pub fn verify_curv_cone() -> Certificate {
    timed("curv_cone", || {
        let data = CurvData::compute();
        let mut failures: Vec<Value> = Vec::new();

        // (d) the two descriptions agree: Curv has exactly the 36 expected
        // rays, and dualizing Nef back recovers it.
        let mut expected: Vec<Vec<BigInt>> =
            curv_generators().iter().map(CurveClass::int_coords).collect();
        expected.sort();
        if data.curv.generators() != expected.as_slice() || !data.curv.is_pointed() {
            failures.push(json!({"check": "curv_rays", "found": data.curv.generators().len()}));
        }
        let back_normals: Vec<Vec<BigInt>> =
            data.nef.generators().iter().map(|d| curve_to_normal(d)).collect();
        match Cone::from_int_inequalities(&back_normals, N1_DIM) {
            Ok(back) if back == data.curv => {}
            _ => failures.push(json!({"check": "nef_dual_roundtrip"})),
        }
        let gens = curv_generators();
        for d in data.nef_rays() {
            if let Some(g) = gens.iter().find(|g| pair(&d, g).is_negative()) {
                failures.push(json!({
                    "check": "nef_pairing",
                    "nef_ray": d.to_string(),
                    "curve": g.to_string(),
                }));
            }
        }

        // (a)-(c) the K-trivial slice
        let mut rays_json = Vec::new();
        let mut by_n = [0usize; 7];
        for g in data.slice_rays() {
            let n = matches_slice_pattern(&g);
            let decomposition = decompose_into_lines(&g);
            if let Some(n) = n {
                by_n[n] += 1;
            }
            if n.is_none() || decomposition.is_none() {
                failures.push(json!({
                    "check": "slice_ray",
                    "ray": g.to_string(),
                    "pattern": n.is_some(),
                    "decomposes": decomposition.is_some(),
                }));
            }
            rays_json.push(json!({
                "ray": g.to_string(),
                "n": n,
                "decomposition": decomposition.as_deref().map(decomposition_json),
            }));
        }
        // Diagnostic only: the same checks on the slice with Eᵢ·C ≥ 0 added.
        let refined = slice_cone_with_exceptionals();
        let refined_rays: Vec<CurveClass> =
            refined.generators().iter().map(|g| CurveClass::from_int_coords(g)).collect();
        let refined_pattern = refined_rays.iter().all(|g| matches_slice_pattern(g).is_some());
        let refined_decompose = refined_rays.iter().all(|g| decompose_into_lines(g).is_some());
        let anchor = pair(&DivisorClass::canonical(), &CurveClass::line()) == rat(-4);
        (
            failures.is_empty() && anchor,
            json!({
                "curv_ray_count": data.curv.generators().len(),
                "nef_ray_count": data.nef.generators().len(),
                "nef_facet_count": data.nef.proper_facets().len(),
                "slice_ray_count": data.slice.generators().len(),
                "slice_rays_by_n": (2..=6).map(|n| json!({"n": n, "count": by_n[n]})).collect::<Vec<_>>(),
                "slice_rays": rays_json,
                "failures": failures,
                "slice_with_exceptional_inequalities": {
                    "ray_count": refined_rays.len(),
                    "all_match_pattern": refined_pattern,
                    "all_decompose": refined_decompose,
                },
            }),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::to_big;

    #[test]
    fn pattern_matcher() {
        let g = CurveClass::from_ints(2, [-1, -1, -1, -1, 0, 0, 0, 0]);
        assert_eq!(matches_slice_pattern(&g), Some(2));
        let g = CurveClass::from_ints(6, [-5, -1, -1, -1, -1, -1, -1, -1]);
        assert_eq!(matches_slice_pattern(&g), Some(6));
        let g = CurveClass::from_ints(3, [-1, -2, -1, -1, -1, 0, 0, 0]);
        assert_eq!(matches_slice_pattern(&g), Some(3));
        assert_eq!(matches_slice_pattern(&CurveClass::secant_line(1, 2).unwrap()), None);
        let g = CurveClass::from_ints(3, [-2, -2, -1, -1, 0, 0, 0, 0]);
        assert_eq!(matches_slice_pattern(&g), None);
    }

    #[test]
    fn conic_decomposes_into_two_lines() {
        let g = CurveClass::from_ints(2, [-1, -1, -1, -1, 0, 0, 0, 0]);
        let parts = decompose_into_lines(&g).unwrap();
        let mut sum = CurveClass::zero();
        for (id, v) in &parts {
            assert!(!v.is_negative());
            sum = &sum + &CurveClass::secant_line(id.0, id.1).unwrap().scale(v);
        }
        assert_eq!(sum, g);
        assert!(decompose_into_lines(&CurveClass::exceptional_line(1).unwrap()).is_none());
    }

    #[test]
    fn curv_has_36_rays() {
        let c = curv_cone();
        assert_eq!(c.generators().len(), 36);
        assert!(c.is_full_dimensional());
        assert!(c.contains_int(&to_big(&[4, -1, -1, -1, -1, -1, -1, -1, -1])));
    }
}
