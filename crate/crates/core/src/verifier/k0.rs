use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::{timed, Certificate};
use crate::arith::{rat, rational_json, Rational};
use crate::cone::Cone;
use crate::error::Result;
use crate::model::{
    pair, relative_movable_member, relative_project, DivisorClass, NetConfig, RelativeClass,
    N1_DIM, POINTS,
};
use crate::mw::{act, MWElement};

use super::curv::curv_generators;

/// Data attached to a subset `I ⊆ {2..8}`.
#[derive(Clone, Debug)]
pub struct K0Vertex {
    /// 1-based indices.
    pub subset: Vec<usize>,
    /// `w_I = Σ_{i∈I} Eᵢ − (|I|−1)E₁`
    pub w: DivisorClass,
    /// `y_I = Σ_{i∈I} (E₁ − Eᵢ)`
    pub y: MWElement,
    /// `act(y_I, w_I) = E₁ + m_I·f`
    pub m: Rational,
    /// `v_I = w_I + (1 − m_I)f`
    pub v: DivisorClass,
}

impl K0Vertex {
    fn to_json(&self) -> Value {
        json!({
            "subset": self.subset,
            "w": self.w.to_string(),
            "y": self.y,
            "m": rational_json(&self.m),
            "v": self.v.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct K0Cone {
    pub cone: Cone,
    /// All 128 subsets, the empty one first.
    pub vertices: Vec<K0Vertex>,
}

pub fn anchor() -> DivisorClass {
    &DivisorClass::exceptional(1).expect("valid index") + &DivisorClass::anti_half_canonical()
}

fn vertex(mask: u32) -> K0Vertex {
    let subset: Vec<usize> = (2..=POINTS).filter(|&i| mask & (1 << (i - 2)) != 0).collect();
    let k = subset.len() as i64;
    let mut c = [0i64; POINTS];
    c[0] = -(k - 1);
    let mut n = [0i64; 7];
    for &i in &subset {
        c[i - 1] = 1;
        n[i - 2] = -1;
    }
    let w = DivisorClass::from_ints(0, c);
    let y = MWElement::new(n);
    let e1 = DivisorClass::exceptional(1).expect("valid index");
    let image = act(&y, &w);
    // image − E₁ = m·f and f has H-coefficient 2
    let m = (&image - &e1).a / rat(2);
    let f = DivisorClass::anti_half_canonical();
    let v = &w + &f.scale(&(rat(1) - &m));
    K0Vertex { subset, w, y, m, v }
}

pub fn build_k0(config: &NetConfig) -> Result<K0Cone> {
    config.require_rank7()?;
    let vertices: Vec<K0Vertex> = (0u32..128).map(vertex).collect();
    let mut gens: Vec<Vec<BigInt>> = vec![DivisorClass::anti_half_canonical().int_coords()];
    gens.extend(vertices.iter().map(|v| v.v.int_coords()));
    let cone = Cone::from_int_generators(&gens, N1_DIM)?;
    Ok(K0Cone { cone, vertices })
}

/// The vertex `Σ_{i∈I}[Eᵢ] − (|I|−1)[E₁]` of Π.
fn pi_vertex(subset: &[usize]) -> RelativeClass {
    let mut r = RelativeClass::zero();
    r.beta[0] = rat(1 - subset.len() as i64);
    for &i in subset {
        r.beta[i - 1] = rat(1);
    }
    r
}

pub fn verify_k0(k0: &K0Cone) -> Certificate {
    timed("k0_construction", || {
        let target = anchor();
        let f = DivisorClass::anti_half_canonical();
        let config = NetConfig::generic();
        let mut failures = Vec::new();
        let mut identities = 0;
        for vx in &k0.vertices {
            let image = act(&vx.y, &vx.v);
            let shifted = &act(&vx.y, &vx.w) - &DivisorClass::exceptional(1).expect("valid index");
            let consistent = shifted == f.scale(&vx.m) && vx.m.is_integer();
            let movable = relative_movable_member(&relative_project(&vx.v), &config);
            let vertex_ok = relative_project(&vx.v) == pi_vertex(&vx.subset);
            if !vx.subset.is_empty() && image == target && consistent {
                identities += 1;
            }
            if image != target || !consistent || !movable || !vertex_ok {
                let mut w = vx.to_json();
                w["image"] = Value::from(image.to_string());
                w["movable"] = Value::from(movable);
                w["pi_vertex"] = Value::from(vertex_ok);
                failures.push(w);
            }
        }
        let nef_failures: Vec<String> = curv_generators()
            .iter()
            .filter(|g| pair(&target, g).is_negative())
            .map(|g| g.to_string())
            .collect();
        let f_is_ray = k0.cone.generators().contains(&f.int_coords());
        let ok = identities == 127 && failures.is_empty() && nef_failures.is_empty() && f_is_ray;
        (
            ok,
            json!({
                "identities_checked": identities,
                "vertex_count": k0.vertices.len(),
                "anchor": target.to_string(),
                "anchor_nef_failures": nef_failures,
                "f_is_generator": f_is_ray,
                "cone_ray_count": k0.cone.generators().len(),
                "cone_facet_count": k0.cone.proper_facets().len(),
                "vertices": k0.vertices.iter().map(K0Vertex::to_json).collect::<Vec<_>>(),
                "failures": failures,
            }),
        )
    })
}

impl K0Cone {
    /// Least `t` with `D + t·f ∈ K₀`, or `None` when no shift lands in K₀.
    ///
    /// Every facet normal `h` has `h·f ≥ 0` since `f ∈ K₀`, so the shifts
    /// form a ray `[t_min, ∞)` cut out facet by facet.
    pub fn min_shift(&self, d: &DivisorClass) -> Option<Rational> {
        let f = DivisorClass::anti_half_canonical().int_coords();
        let x = d.coords();
        let mut t_min: Option<Rational> = None;
        for h in self.cone.equalities() {
            let hf = crate::arith::int_dot(h, &f);
            let hd = crate::arith::int_dot_rat(h, &x);
            debug_assert!(hf.is_zero());
            if !hd.is_zero() {
                return None;
            }
        }
        for h in self.cone.proper_facets() {
            let hf = Rational::from_integer(crate::arith::int_dot(h, &f));
            let hd = crate::arith::int_dot_rat(h, &x);
            if hf.is_zero() {
                if hd.is_negative() {
                    return None;
                }
                continue;
            }
            let t = -hd / hf;
            if t_min.as_ref().is_none_or(|m| t > *m) {
                t_min = Some(t);
            }
        }
        // f spans a ray of the pointed cone K₀, so some facet misses it
        Some(t_min.expect("K0 has a facet not containing f"))
    }
}
