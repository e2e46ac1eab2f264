//! Chambers of the movable cone: nef cones of the small modifications
//! obtained by flopping fibral curves.
//!
//! A chamber is recorded by the classes of its 28 fibre lines and their
//! residual cubics. The lines `lᵢ` in the exceptional divisors are the same
//! in every chamber. Flopping a slot `γ` of a fibre sends `γ ↦ −γ` and the
//! companion `δ ↦ δ + 2γ`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{int_vector_json, rat, Rational};
use crate::cone::lp::{LinearProgram, Relation};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::model::{pair, CurveClass, DivisorClass, NetConfig, N1_DIM, POINTS};
use crate::mw::{act, act_curve, MWElement};

/// Unordered pair `{i, j}` with `1 ≤ i < j ≤ 8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberId(pub usize, pub usize);

impl FiberId {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if !(1..=POINTS).contains(&i) || !(1..=POINTS).contains(&j) || i == j {
            return Err(Error::IndexOutOfRange(format!("fiber {{{i},{j}}}")));
        }
        Ok(FiberId(i.min(j), i.max(j)))
    }

    /// The 28 fibres in lexicographic order.
    pub fn all() -> Vec<FiberId> {
        let mut v = Vec::with_capacity(28);
        for i in 1..=POINTS {
            for j in i + 1..=POINTS {
                v.push(FiberId(i, j));
            }
        }
        v
    }

    fn index(&self) -> usize {
        let (i, j) = (self.0 - 1, self.1 - 1);
        // fibres before row i, then offset in row
        i * (2 * POINTS - i - 1) / 2 + (j - i - 1)
    }
}

impl fmt::Display for FiberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

impl Serialize for FiberId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiberId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [i, j] = <[usize; 2]>::deserialize(d)?;
        FiberId::new(i, j).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Line,
    Residual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flop {
    pub fiber: FiberId,
    pub slot: Slot,
}

pub type FlopWord = Vec<Flop>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberState {
    pub fiber: FiberId,
    pub line_slot: CurveClass,
    pub residual_slot: CurveClass,
}

impl FiberState {
    pub fn slot(&self, slot: Slot) -> &CurveClass {
        match slot {
            Slot::Line => &self.line_slot,
            Slot::Residual => &self.residual_slot,
        }
    }

    fn flop(&mut self, slot: Slot) {
        let (g, d) = match slot {
            Slot::Line => (&mut self.line_slot, &mut self.residual_slot),
            Slot::Residual => (&mut self.residual_slot, &mut self.line_slot),
        };
        *d = &*d + &(2 * &*g);
        *g = -&*g;
    }
}

/// Identity of a chamber: its 56 slot classes as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberKey(pub Vec<Vec<BigInt>>);

#[derive(Clone, Debug)]
pub struct ChamberState {
    fibers: Vec<FiberState>,
    pub flop_word: FlopWord,
}

impl PartialEq for ChamberState {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for ChamberState {}

pub fn initial_chamber(config: &NetConfig) -> Result<ChamberState> {
    config.require_rank7()?;
    Ok(ChamberState::initial())
}

impl ChamberState {
    fn initial() -> Self {
        let fibers = FiberId::all()
            .into_iter()
            .map(|id| FiberState {
                fiber: id,
                line_slot: CurveClass::secant_line(id.0, id.1).expect("valid pair"),
                residual_slot: CurveClass::residual_cubic(id.0, id.1).expect("valid pair"),
            })
            .collect();
        ChamberState {
            fibers,
            flop_word: Vec::new(),
        }
    }

    pub fn fibers(&self) -> &[FiberState] {
        &self.fibers
    }

    pub fn fiber(&self, id: FiberId) -> &FiberState {
        &self.fibers[id.index()]
    }

    pub fn key(&self) -> ChamberKey {
        let mut v: Vec<Vec<BigInt>> = self
            .fibers
            .iter()
            .flat_map(|f| [f.line_slot.int_coords(), f.residual_slot.int_coords()])
            .collect();
        v.sort();
        ChamberKey(v)
    }

    /// The 64 curve classes whose dual is the chamber: `l₁..l₈`, then both
    /// slots of each fibre.
    pub fn curve_generators(&self) -> Vec<CurveClass> {
        let mut out: Vec<CurveClass> = (1..=POINTS)
            .map(|i| CurveClass::exceptional_line(i).expect("valid index"))
            .collect();
        for f in &self.fibers {
            out.push(f.line_slot.clone());
            out.push(f.residual_slot.clone());
        }
        out
    }

    pub fn int_generators(&self) -> Vec<Vec<BigInt>> {
        self.curve_generators().iter().map(CurveClass::int_coords).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let fiber = CurveClass::fiber();
        let k = DivisorClass::canonical();
        for f in &self.fibers {
            if &f.line_slot + &f.residual_slot != fiber {
                return Err(Error::InconsistentChamber(format!(
                    "slots of fiber {} do not sum to F",
                    f.fiber
                )));
            }
            if !pair(&k, &f.line_slot).is_zero() {
                return Err(Error::InconsistentChamber(format!(
                    "slot of fiber {} is not K-trivial",
                    f.fiber
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("chamber serializes")
    }
}

impl Serialize for ChamberState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fibers: Vec<serde_json::Value> = self
            .fibers
            .iter()
            .map(|f| {
                serde_json::json!({
                    "fiber": f.fiber,
                    "line": int_vector_json(&f.line_slot.int_coords()),
                    "residual": int_vector_json(&f.residual_slot.int_coords()),
                })
            })
            .collect();
        let mut st = s.serialize_struct("ChamberState", 2)?;
        st.serialize_field("fibers", &fibers)?;
        st.serialize_field("flop_word", &self.flop_word)?;
        st.end()
    }
}

pub fn flop(s: &ChamberState, fiber: FiberId, slot: Slot) -> ChamberState {
    let mut out = s.clone();
    out.fibers[fiber.index()].flop(slot);
    out.flop_word.push(Flop { fiber, slot });
    out
}

/// Strict feasibility: some divisor is positive on every generator, i.e.
/// the generated cone is pointed and its dual full-dimensional. Returns a
/// witness when one exists.
pub fn strictly_positive_divisor(curves: &[Vec<BigInt>]) -> Option<DivisorClass> {
    let mut lp = LinearProgram::new(N1_DIM);
    for v in 0..N1_DIM {
        lp.set_free(v);
    }
    for g in curves {
        // pair(D, g) = a·e − Σ cᵢdᵢ
        let row: Vec<Rational> = g
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let x = Rational::from_integer(x.clone());
                if k == 0 {
                    x
                } else {
                    -x
                }
            })
            .collect();
        lp.add(row, Relation::Ge, rat(1));
    }
    match lp.solve() {
        crate::cone::lp::LpOutcome::Optimal { x, .. } => Some(DivisorClass {
            a: x[0].clone(),
            c: std::array::from_fn(|i| x[i + 1].clone()),
        }),
        _ => None,
    }
}

/// A nonnegative combination of the curves, with coefficients summing to 1,
/// that vanishes. It exists iff the generated cone contains a line.
pub fn vanishing_combination(curves: &[Vec<BigInt>]) -> Option<Vec<Rational>> {
    let mut lp = LinearProgram::new(curves.len());
    for k in 0..N1_DIM {
        let row = curves
            .iter()
            .map(|g| Rational::from_integer(g[k].clone()))
            .collect();
        lp.add(row, Relation::Eq, Rational::zero());
    }
    lp.add(vec![rat(1); curves.len()], Relation::Eq, rat(1));
    match lp.solve() {
        crate::cone::lp::LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// True iff the chamber cone of `s` is full-dimensional.
pub fn is_full_dimensional(s: &ChamberState) -> bool {
    vanishing_combination(&s.int_generators()).is_none()
}

/// Cone of curve classes generated by the 64 chamber generators.
pub fn chamber_curve_cone(s: &ChamberState) -> Result<Cone> {
    Cone::from_int_generators(&s.int_generators(), N1_DIM)
}

/// The chamber as a cone in N¹(X), in divisor coordinates.
///
/// Curve generators are turned into divisor inequalities through the pairing
/// `a·e − Σ cᵢdᵢ`.
pub fn chamber_cone(s: &ChamberState) -> Result<Cone> {
    let normals: Vec<Vec<BigInt>> = s.int_generators().iter().map(|g| curve_to_normal(g)).collect();
    let cone = Cone::from_int_inequalities(&normals, N1_DIM)?;
    if !cone.is_full_dimensional() {
        return Err(Error::InconsistentChamber(format!(
            "chamber cone has dimension {} after flops {}",
            cone.span_dimension(),
            word_string(&s.flop_word)
        )));
    }
    Ok(cone)
}

/// The linear form `D ↦ pair(D, γ)` in divisor coordinates.
pub fn curve_to_normal(g: &[BigInt]) -> Vec<BigInt> {
    g.iter()
        .enumerate()
        .map(|(k, x)| if k == 0 { x.clone() } else { -x })
        .collect()
}

pub fn word_string(w: &[Flop]) -> String {
    if w.is_empty() {
        return "[]".into();
    }
    let parts: Vec<String> = w
        .iter()
        .map(|f| {
            let s = match f.slot {
                Slot::Line => "line",
                Slot::Residual => "residual",
            };
            format!("{}:{}", f.fiber, s)
        })
        .collect();
    parts.join(" ")
}

/// Tie-breaking between slots with equal negative pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Lexicographically smallest fibre, line before residual.
    Lexicographic,
    /// Lexicographically largest fibre, residual before line.
    ReverseLexicographic,
}

#[derive(Clone, Debug)]
pub struct NefifyOutcome {
    pub state: ChamberState,
    pub word: FlopWord,
}

/// Flops the most negative fibral slot until `D` is nonnegative on every
/// chamber generator.
pub fn nefify(d: &DivisorClass, config: &NetConfig, max_flops: usize) -> Result<NefifyOutcome> {
    nefify_with(d, config, max_flops, TieBreak::Lexicographic)
}

pub fn nefify_with(
    d: &DivisorClass,
    config: &NetConfig,
    max_flops: usize,
    tie: TieBreak,
) -> Result<NefifyOutcome> {
    let start = initial_chamber(config)?;
    nefify_from(d, start, max_flops, tie)
}

pub fn nefify_from(
    d: &DivisorClass,
    mut state: ChamberState,
    max_flops: usize,
    tie: TieBreak,
) -> Result<NefifyOutcome> {
    if !crate::model::relative_movable_member(&crate::model::relative_project(d), &NetConfig::generic())
        || !pair(d, &CurveClass::fiber()).is_positive()
    {
        return Err(Error::NotRelativelyMovable);
    }
    for i in 1..=POINTS {
        if pair(d, &CurveClass::exceptional_line(i)?).is_negative() {
            return Err(Error::NegativeOnExceptionalLine(i));
        }
    }
    let mut values: Vec<[Rational; 2]> = state
        .fibers
        .iter()
        .map(|f| [pair(d, &f.line_slot), pair(d, &f.residual_slot)])
        .collect();
    let start_len = state.flop_word.len();
    let mut flops = 0usize;
    loop {
        let mut best: Option<(usize, Slot)> = None;
        let order: Box<dyn Iterator<Item = (usize, Slot)>> = match tie {
            TieBreak::Lexicographic => Box::new(
                (0..values.len()).flat_map(|i| [(i, Slot::Line), (i, Slot::Residual)]),
            ),
            TieBreak::ReverseLexicographic => Box::new(
                (0..values.len())
                    .rev()
                    .flat_map(|i| [(i, Slot::Residual), (i, Slot::Line)]),
            ),
        };
        for (i, slot) in order {
            let v = &values[i][slot as usize];
            if !v.is_negative() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bs)) => *v < values[bi][bs as usize],
            };
            if better {
                best = Some((i, slot));
            }
        }
        let Some((i, slot)) = best else { break };
        if flops == max_flops {
            return Err(Error::BudgetExhausted(max_flops));
        }
        let id = state.fibers[i].fiber;
        state.fibers[i].flop(slot);
        state.flop_word.push(Flop { fiber: id, slot });
        let (g, o) = (slot as usize, 1 - slot as usize);
        let gv = values[i][g].clone();
        values[i][o] = &values[i][o] + &(&gv * rat(2));
        values[i][g] = -gv;
        flops += 1;
    }
    let word = state.flop_word[start_len..].to_vec();
    Ok(NefifyOutcome { state, word })
}

/// Every chamber generator pairs nonnegatively with `d`.
pub fn is_nef_on(d: &DivisorClass, s: &ChamberState) -> bool {
    s.curve_generators().iter().all(|g| !pair(d, g).is_negative())
}

/// Transports a chamber by `ψ_y`, acting contragrediently on slot classes.
pub fn mw_transport(s: &ChamberState, y: &MWElement) -> Result<ChamberState> {
    if y.is_zero() {
        return Ok(s.clone());
    }
    let mut out = s.clone();
    for f in out.fibers.iter_mut() {
        f.line_slot = act_curve(y, &f.line_slot);
        f.residual_slot = act_curve(y, &f.residual_slot);
    }
    out.validate()
        .map_err(|e| Error::TransportInconsistency(e.to_string()))?;
    if !is_full_dimensional(&out) {
        return Err(Error::TransportInconsistency(format!(
            "transported chamber is not full-dimensional (y = {})",
            y
        )));
    }
    Ok(out)
}

/// Compares `chamber_cone(mw_transport(s, y))` with `ψ_y(chamber_cone(s))`
/// as point sets. Returns a generator of one side missing from the other.
pub fn transport_image_check(s: &ChamberState, y: &MWElement) -> Result<Option<DivisorClass>> {
    let source = chamber_cone(s)?;
    let target = chamber_cone(&mw_transport(s, y)?)?;
    let image: Vec<DivisorClass> = source
        .generators()
        .iter()
        .map(|g| act(y, &DivisorClass::from_int_coords(g)))
        .collect();
    for d in &image {
        if !target.contains_int(&d.int_coords()) {
            return Ok(Some(d.clone()));
        }
    }
    let pre = -*y;
    for g in target.generators() {
        let d = DivisorClass::from_int_coords(g);
        if !source.contains_int(&act(&pre, &d).int_coords()) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Flops from `s` whose result is still a full-dimensional chamber.
pub fn genuine_neighbors(s: &ChamberState) -> Vec<(Flop, ChamberState)> {
    FiberId::all()
        .into_iter()
        .flat_map(|id| [Slot::Line, Slot::Residual].map(|slot| (id, slot)))
        .filter_map(|(id, slot)| {
            let t = flop(s, id, slot);
            is_full_dimensional(&t).then_some((Flop { fiber: id, slot }, t))
        })
        .collect()
}

/// Random walk of `length` flops across full-dimensional chambers. Candidate
/// flops are tried in random order; a walk stops early only if no flop is
/// genuine.
pub fn random_walk<R: Rng>(rng: &mut R, length: usize) -> ChamberState {
    let mut s = ChamberState::initial();
    let mut candidates: Vec<(FiberId, Slot)> = FiberId::all()
        .into_iter()
        .flat_map(|id| [Slot::Line, Slot::Residual].map(|slot| (id, slot)))
        .collect();
    for _ in 0..length {
        candidates.shuffle(rng);
        let next = candidates.iter().find_map(|&(id, slot)| {
            // repeating the last flop undoes it
            if s.flop_word.last() == Some(&Flop { fiber: id, slot }) {
                return None;
            }
            let t = flop(&s, id, slot);
            is_full_dimensional(&t).then_some(t)
        });
        match next {
            Some(t) => s = t,
            None => break,
        }
    }
    s
}

/// Outcome of comparing a chamber with one of its flops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallCheck {
    /// The cones meet in a common facet on `γ^⊥`.
    Shared,
    /// One side is not a full-dimensional chamber.
    Degenerate(String),
    /// The intersection is not a common facet on `γ^⊥`.
    NotAFacet {
        intersection_dim: usize,
        facet_of_source: bool,
        facet_of_target: bool,
    },
}

/// Checks that `s` and `flop(s, fiber, slot)` meet in a common facet lying on
/// `{D : D·γ = 0}` for the flopped class `γ`.
pub fn wall_sharing(s: &ChamberState, fiber: FiberId, slot: Slot) -> WallCheck {
    let t = flop(s, fiber, slot);
    let (a, b) = match (chamber_cone(s), chamber_cone(&t)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return WallCheck::Degenerate(e.to_string()),
    };
    let gamma = s.fiber(fiber).slot(slot).int_coords();
    let h = crate::arith::primitive_int(curve_to_normal(&gamma));
    let minus_h: Vec<BigInt> = h.iter().map(|x| -x).collect();
    let facet_of_source = a.proper_facets().contains(&h);
    let facet_of_target = b.proper_facets().contains(&minus_h);
    let meet = match a.intersect(&b) {
        Ok(m) => m,
        Err(e) => return WallCheck::Degenerate(e.to_string()),
    };
    let on_wall = meet.equalities().len() == 1
        && (meet.equalities()[0] == h || meet.equalities()[0] == minus_h);
    let intersection_dim = meet.span_dimension();
    if intersection_dim == N1_DIM - 1 && on_wall && facet_of_source && facet_of_target {
        WallCheck::Shared
    } else {
        WallCheck::NotAFacet {
            intersection_dim,
            facet_of_source,
            facet_of_target,
        }
    }
}

/// `None` when the two chamber interiors are disjoint, with a vanishing
/// nonnegative combination of the pooled curve generators as the
/// certificate. Otherwise returns a divisor strictly inside both.
pub fn interior_overlap(s: &ChamberState, t: &ChamberState) -> std::result::Result<Vec<Rational>, DivisorClass> {
    let mut gens = s.int_generators();
    gens.extend(t.int_generators());
    match vanishing_combination(&gens) {
        Some(lambda) => Ok(lambda),
        None => Err(strictly_positive_divisor(&gens).expect("pointed cone has an interior point")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> NetConfig {
        NetConfig::generic()
    }

    fn nef_cone() -> Cone {
        let mut gens: Vec<Vec<BigInt>> = (1..=8)
            .map(|i| CurveClass::exceptional_line(i).unwrap().int_coords())
            .collect();
        for id in FiberId::all() {
            gens.push(CurveClass::secant_line(id.0, id.1).unwrap().int_coords());
        }
        let normals: Vec<_> = gens.iter().map(|g| curve_to_normal(g)).collect();
        Cone::from_int_inequalities(&normals, 9).unwrap()
    }

    #[test]
    fn fiber_ids() {
        let all = FiberId::all();
        assert_eq!(all.len(), 28);
        for (k, id) in all.iter().enumerate() {
            assert_eq!(id.index(), k);
        }
        assert_eq!(FiberId::new(5, 2).unwrap(), FiberId(2, 5));
        assert!(FiberId::new(3, 3).is_err());
    }

    #[test]
    fn initial_chamber_is_nef_cone() {
        let s = initial_chamber(&cfg()).unwrap();
        assert!(s.flop_word.is_empty());
        s.validate().unwrap();
        assert_eq!(chamber_cone(&s).unwrap(), nef_cone());
        let one = NetConfig::new(vec![crate::model::ReducibleQuadric::new([1, 2, 3, 4], [5, 6, 7, 8]).unwrap()]).unwrap();
        assert_eq!(initial_chamber(&one).unwrap_err(), Error::RequiresRank7(6));
    }

    #[test]
    fn residual_is_sum_of_disjoint_lines() {
        let r12 = CurveClass::residual_cubic(1, 2).unwrap();
        let sum = &(&CurveClass::secant_line(3, 4).unwrap() + &CurveClass::secant_line(5, 6).unwrap())
            + &CurveClass::secant_line(7, 8).unwrap();
        assert_eq!(r12, sum);
    }

    #[test]
    fn line_flop_values() {
        let s = flop(&ChamberState::initial(), FiberId(1, 2), Slot::Line);
        let f12 = s.fiber(FiberId(1, 2));
        let c12 = CurveClass::secant_line(1, 2).unwrap();
        assert_eq!(f12.line_slot, -&c12);
        assert_eq!(f12.residual_slot, &CurveClass::residual_cubic(1, 2).unwrap() + &(2 * &c12));
        let d12 = DivisorClass::plane_through(1, 2).unwrap();
        assert_eq!(pair(&d12, &f12.line_slot), rat(1));
        assert_eq!(pair(&d12, &f12.residual_slot), rat(1));
        let cone = chamber_cone(&s).unwrap();
        assert!(cone.contains_int(&d12.int_coords()));
        s.validate().unwrap();
    }

    #[test]
    fn flop_is_involution() {
        let s = ChamberState::initial();
        for slot in [Slot::Line, Slot::Residual] {
            let t = flop(&flop(&s, FiberId(3, 7), slot), FiberId(3, 7), slot);
            assert_eq!(t, s);
            assert_eq!(t.flop_word.len(), 2);
        }
    }

    #[test]
    fn residual_flop_of_initial_chamber_is_degenerate() {
        let t = flop(&ChamberState::initial(), FiberId(1, 2), Slot::Residual);
        assert!(!is_full_dimensional(&t));
        assert!(matches!(chamber_cone(&t), Err(Error::InconsistentChamber(_))));
    }

    #[test]
    fn f_lies_in_every_chamber() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = DivisorClass::anti_half_canonical();
        for _ in 0..5 {
            let s = random_walk(&mut rng, 6);
            assert!(is_nef_on(&f, &s));
        }
    }

    #[test]
    fn nefify_examples() {
        let anchor = &DivisorClass::exceptional(1).unwrap() + &DivisorClass::anti_half_canonical();
        assert!(nefify(&anchor, &cfg(), 10).unwrap().word.is_empty());

        let d12 = DivisorClass::plane_through(1, 2).unwrap();
        let out = nefify(&d12, &cfg(), 10).unwrap();
        assert_eq!(out.word, vec![Flop { fiber: FiberId(1, 2), slot: Slot::Line }]);
        assert!(is_nef_on(&d12, &out.state));

        let d = act(&MWElement::generator(2).unwrap(), &DivisorClass::plane_through(3, 4).unwrap());
        let out = nefify(&d, &cfg(), 10_000).unwrap();
        assert!(is_nef_on(&d, &out.state));
        assert!(chamber_cone(&out.state).unwrap().contains_int(&d.int_coords()));
    }

    #[test]
    fn nefify_budget_and_errors() {
        let d = DivisorClass::from_ints(1, [-5, -5, 0, 0, 0, 0, 0, 0]);
        // D·F = −6
        assert_eq!(nefify(&d, &cfg(), 10).unwrap_err(), Error::NotRelativelyMovable);
        let d = DivisorClass::from_ints(10, [-1, -1, -1, -1, -1, -1, -1, -20]);
        let needed = nefify(&d, &cfg(), 10_000).unwrap().word.len();
        assert!(needed > 1);
        assert_eq!(
            nefify(&d, &cfg(), needed - 1).unwrap_err(),
            Error::BudgetExhausted(needed - 1)
        );
        let d = DivisorClass::from_ints(3, [1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(nefify(&d, &cfg(), 10).unwrap_err(), Error::NegativeOnExceptionalLine(1));
    }

    #[test]
    fn tie_break_does_not_change_terminal_chamber() {
        let d = DivisorClass::from_ints(10, [-1, -1, -1, -1, -1, -1, -1, -20]);
        let a = nefify_with(&d, &cfg(), 10_000, TieBreak::Lexicographic).unwrap();
        let b = nefify_with(&d, &cfg(), 10_000, TieBreak::ReverseLexicographic).unwrap();
        assert_eq!(a.state, b.state);
    }

    #[test]
    fn transport_basics() {
        let s = ChamberState::initial();
        assert_eq!(mw_transport(&s, &MWElement::zero()).unwrap(), s);
        let y = MWElement::generator(2).unwrap();
        let t = mw_transport(&s, &y).unwrap();
        for f in t.fibers() {
            assert_eq!(&f.line_slot + &f.residual_slot, CurveClass::fiber());
        }
        let anchor = &DivisorClass::exceptional(1).unwrap() + &DivisorClass::anti_half_canonical();
        let image = act(&y, &anchor);
        assert!(chamber_cone(&t).unwrap().contains_int(&image.int_coords()));
    }

    #[test]
    fn serialization() {
        let s = flop(&ChamberState::initial(), FiberId(1, 2), Slot::Line);
        let v = s.to_json();
        assert_eq!(v["fibers"].as_array().unwrap().len(), 28);
        assert_eq!(v["flop_word"], serde_json::json!([{"fiber": [1, 2], "slot": "line"}]));
        let w: FlopWord = serde_json::from_value(v["flop_word"].clone()).unwrap();
        assert_eq!(w, s.flop_word);
    }

    #[test]
    fn line_flop_shares_a_wall() {
        let s = ChamberState::initial();
        assert_eq!(wall_sharing(&s, FiberId(1, 2), Slot::Line), WallCheck::Shared);
        assert!(matches!(
            wall_sharing(&s, FiberId(1, 2), Slot::Residual),
            WallCheck::Degenerate(_)
        ));
    }

    #[test]
    fn neighbouring_interiors_are_disjoint() {
        let s = ChamberState::initial();
        let t = flop(&s, FiberId(4, 6), Slot::Line);
        let lambda = interior_overlap(&s, &t).unwrap();
        assert!(lambda.iter().all(|x| !x.is_negative()));
        let d = interior_overlap(&s, &s).unwrap_err();
        assert!(s.curve_generators().iter().all(|g| pair(&d, g).is_positive()));
    }
}
