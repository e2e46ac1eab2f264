//! Intersection theory of the blowup `X` of P³ in the eight base points of a
//! net of quadrics.
//!
//! Divisors are written `aH + Σ cᵢEᵢ` and curves `e·l + Σ dᵢlᵢ`. The pairing
//! is `H·l = 1`, `H·lᵢ = 0`, `Eᵢ·l = 0`, `Eᵢ·lⱼ = −δᵢⱼ`. The trilinear form
//! uses `H³ = 1`, `Eᵢ³ = 1` and vanishing mixed terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{rat, Rational, RationalVector};
use crate::cone::lp::{LinearProgram, Relation};
use crate::error::{Error, Result};

pub const POINTS: usize = 8;
/// Dimension of N¹(X) and N₁(X).
pub const N1_DIM: usize = 9;

fn zeros8() -> [Rational; POINTS] {
    std::array::from_fn(|_| Rational::zero())
}

fn check_index(i: usize) -> Result<usize> {
    if (1..=POINTS).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::IndexOutOfRange(format!(
            "point index {i} is outside 1..=8"
        )))
    }
}

fn check_pair(i: usize, j: usize) -> Result<(usize, usize)> {
    let (a, b) = (check_index(i)?, check_index(j)?);
    if a == b {
        return Err(Error::IndexOutOfRange(format!(
            "pair indices must differ, got {i} and {j}"
        )));
    }
    Ok((a.min(b), a.max(b)))
}

macro_rules! class_type {
    ($name:ident, $head:ident, $tail:ident, $head_sym:expr, $tail_sym:expr) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            pub $head: Rational,
            pub $tail: [Rational; POINTS],
        }

        impl $name {
            pub fn zero() -> Self {
                $name {
                    $head: Rational::zero(),
                    $tail: zeros8(),
                }
            }

            pub fn from_ints($head: i64, $tail: [i64; POINTS]) -> Self {
                $name {
                    $head: rat($head),
                    $tail: $tail.map(rat),
                }
            }

            /// Coordinates in the standard basis, head first.
            pub fn coords(&self) -> RationalVector {
                let mut v = Vec::with_capacity(N1_DIM);
                v.push(self.$head.clone());
                v.extend(self.$tail.iter().cloned());
                RationalVector::new(v)
            }

            pub fn from_coords(v: &RationalVector) -> Result<Self> {
                if v.dim() != N1_DIM {
                    return Err(Error::DimensionMismatch {
                        expected: N1_DIM,
                        found: v.dim(),
                    });
                }
                let e = v.entries();
                Ok($name {
                    $head: e[0].clone(),
                    $tail: std::array::from_fn(|i| e[i + 1].clone()),
                })
            }

            pub fn from_int_coords(v: &[BigInt]) -> Self {
                assert_eq!(v.len(), N1_DIM);
                $name {
                    $head: Rational::from_integer(v[0].clone()),
                    $tail: std::array::from_fn(|i| Rational::from_integer(v[i + 1].clone())),
                }
            }

            pub fn is_integral(&self) -> bool {
                self.$head.is_integer() && self.$tail.iter().all(|x| x.is_integer())
            }

            pub fn is_zero(&self) -> bool {
                self.$head.is_zero() && self.$tail.iter().all(Zero::is_zero)
            }

            /// Integer coordinates; panics on a non-integral class.
            pub fn int_coords(&self) -> Vec<BigInt> {
                assert!(self.is_integral(), "class {self} is not integral");
                std::iter::once(&self.$head)
                    .chain(self.$tail.iter())
                    .map(|x| x.to_integer())
                    .collect()
            }

            pub fn scale(&self, k: &Rational) -> Self {
                $name {
                    $head: &self.$head * k,
                    $tail: std::array::from_fn(|i| &self.$tail[i] * k),
                }
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name {
                    $head: &self.$head + &rhs.$head,
                    $tail: std::array::from_fn(|i| &self.$tail[i] + &rhs.$tail[i]),
                }
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name {
                    $head: &self.$head - &rhs.$head,
                    $tail: std::array::from_fn(|i| &self.$tail[i] - &rhs.$tail[i]),
                }
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name {
                    $head: -&self.$head,
                    $tail: std::array::from_fn(|i| -&self.$tail[i]),
                }
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                -&self
            }
        }

        impl Mul<&$name> for i64 {
            type Output = $name;
            fn mul(self, rhs: &$name) -> $name {
                rhs.scale(&rat(self))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut terms: Vec<(Rational, String)> = Vec::new();
                terms.push((self.$head.clone(), $head_sym.to_string()));
                for (i, x) in self.$tail.iter().enumerate() {
                    terms.push((x.clone(), format!("{}{}", $tail_sym, i + 1)));
                }
                write_linear_combination(f, &terms)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                self.coords().serialize(s)
            }
        }
    };
}

fn write_linear_combination(f: &mut fmt::Formatter<'_>, terms: &[(Rational, String)]) -> fmt::Result {
    let mut first = true;
    for (k, sym) in terms {
        if k.is_zero() {
            continue;
        }
        let mag = k.abs();
        let coef = if mag.is_one() {
            String::new()
        } else if mag.is_integer() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        match (first, k.is_negative()) {
            (true, true) => write!(f, "-{coef}{sym}")?,
            (true, false) => write!(f, "{coef}{sym}")?,
            (false, true) => write!(f, " - {coef}{sym}")?,
            (false, false) => write!(f, " + {coef}{sym}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

class_type!(DivisorClass, a, c, "H", "E");
class_type!(CurveClass, e, d, "l", "l");

impl DivisorClass {
    pub fn h() -> Self {
        DivisorClass::from_ints(1, [0; POINTS])
    }

    /// `Eᵢ`, 1-based.
    pub fn exceptional(i: usize) -> Result<Self> {
        let i = check_index(i)?;
        let mut c = [0; POINTS];
        c[i] = 1;
        Ok(DivisorClass::from_ints(0, c))
    }

    pub fn canonical() -> Self {
        DivisorClass::from_ints(-4, [2; POINTS])
    }

    /// `f = −½K_X = 2H − ΣEᵢ`, the class of the fibration.
    pub fn anti_half_canonical() -> Self {
        DivisorClass::from_ints(2, [-1; POINTS])
    }

    /// `D_ij = H − Eᵢ − Eⱼ`, 1-based.
    pub fn plane_through(i: usize, j: usize) -> Result<Self> {
        let (a, b) = check_pair(i, j)?;
        let mut c = [0; POINTS];
        c[a] = -1;
        c[b] = -1;
        Ok(DivisorClass::from_ints(1, c))
    }

    /// `H − Σ_{q∈S} E_q` for a set of 0-based indices.
    fn plane_through_set(set: &[usize]) -> Self {
        let mut c = [0; POINTS];
        for &q in set {
            c[q] = -1;
        }
        DivisorClass::from_ints(1, c)
    }
}

impl CurveClass {
    pub fn line() -> Self {
        CurveClass::from_ints(1, [0; POINTS])
    }

    /// `lᵢ`, a line in `Eᵢ`, 1-based.
    pub fn exceptional_line(i: usize) -> Result<Self> {
        let i = check_index(i)?;
        let mut d = [0; POINTS];
        d[i] = 1;
        Ok(CurveClass::from_ints(0, d))
    }

    /// The class of a fibre, `F = 4l − Σlᵢ`.
    pub fn fiber() -> Self {
        CurveClass::from_ints(4, [-1; POINTS])
    }

    /// `C_ij = l − lᵢ − lⱼ`, the line through `pᵢ` and `pⱼ`.
    pub fn secant_line(i: usize, j: usize) -> Result<Self> {
        let (a, b) = check_pair(i, j)?;
        let mut d = [0; POINTS];
        d[a] = -1;
        d[b] = -1;
        Ok(CurveClass::from_ints(1, d))
    }

    /// `R_ij = F − C_ij`, the residual cubic in the fibre containing `C_ij`.
    pub fn residual_cubic(i: usize, j: usize) -> Result<Self> {
        Ok(&CurveClass::fiber() - &CurveClass::secant_line(i, j)?)
    }

    fn conic_through_set(set: &[usize]) -> Self {
        let mut d = [0; POINTS];
        for &q in set {
            d[q] = -1;
        }
        CurveClass::from_ints(2, d)
    }
}

/// `D · γ = a·e − Σ cᵢdᵢ`.
pub fn pair(d: &DivisorClass, g: &CurveClass) -> Rational {
    let mut acc = &d.a * &g.e;
    for i in 0..POINTS {
        acc -= &d.c[i] * &g.d[i];
    }
    acc
}

/// `D₁·D₂·D₃ = a₁a₂a₃ + Σ c₁ᵢc₂ᵢc₃ᵢ`.
pub fn triple(d1: &DivisorClass, d2: &DivisorClass, d3: &DivisorClass) -> Rational {
    let mut acc = &d1.a * &d2.a * &d3.a;
    for i in 0..POINTS {
        acc += &d1.c[i] * &d2.c[i] * &d3.c[i];
    }
    acc
}

/// The 1-cycle `D²`.
pub fn curve_square(d: &DivisorClass) -> CurveClass {
    CurveClass {
        e: &d.a * &d.a,
        d: std::array::from_fn(|i| -(&d.c[i] * &d.c[i])),
    }
}

/// `q(x) = x·x·f`, the quadratic form preserved by the Mordell–Weil action.
pub fn fibre_form(x: &DivisorClass) -> Rational {
    triple(x, x, &DivisorClass::anti_half_canonical())
}

/// A reducible quadric of the net, as the two 4-point sets cut out by its
/// planes. Indices are 0-based internally; the first set labels `D¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibleQuadric {
    parts: [[usize; 4]; 2],
}

impl ReducibleQuadric {
    /// Builds a quadric from 1-based point sets.
    pub fn new(first: [usize; 4], second: [usize; 4]) -> Result<Self> {
        let mut seen = [false; POINTS];
        let mut parts = [[0usize; 4]; 2];
        for (k, set) in [first, second].iter().enumerate() {
            for (slot, &p) in set.iter().enumerate() {
                let idx = check_index(p).map_err(|_| {
                    Error::InvalidConfig(format!("point index {p} is outside 1..=8"))
                })?;
                if seen[idx] {
                    return Err(Error::InvalidConfig(format!(
                        "point {p} appears twice in partition {first:?} | {second:?}"
                    )));
                }
                seen[idx] = true;
                parts[k][slot] = idx;
            }
            parts[k].sort_unstable();
        }
        Ok(ReducibleQuadric { parts })
    }

    /// 0-based point set of the plane `Dᵃ` (a ∈ {1, 2}).
    pub fn part(&self, a: usize) -> &[usize; 4] {
        &self.parts[a - 1]
    }

    fn unordered_key(&self) -> [[usize; 4]; 2] {
        let mut k = self.parts;
        k.sort_unstable();
        k
    }

    pub fn one_based(&self) -> [[usize; 4]; 2] {
        self.parts.map(|p| p.map(|x| x + 1))
    }
}

/// The combinatorics of the net: its reducible members.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NetConfig {
    reducible_quadrics: Vec<ReducibleQuadric>,
}

#[derive(Serialize, Deserialize)]
struct NetConfigJson {
    reducible_quadrics: Vec<[[usize; 4]; 2]>,
}

impl NetConfig {
    /// The generic net: no reducible member, Mordell–Weil rank 7.
    pub fn generic() -> Self {
        NetConfig::default()
    }

    pub fn new(quadrics: Vec<ReducibleQuadric>) -> Result<Self> {
        if quadrics.len() > 7 {
            return Err(Error::InvalidConfig(format!(
                "at most 7 reducible quadrics are possible, got {}",
                quadrics.len()
            )));
        }
        for (i, q) in quadrics.iter().enumerate() {
            if quadrics[..i]
                .iter()
                .any(|p| p.unordered_key() == q.unordered_key())
            {
                return Err(Error::InvalidConfig(format!(
                    "reducible quadric {:?} is listed twice",
                    q.one_based()
                )));
            }
        }
        Ok(NetConfig {
            reducible_quadrics: quadrics,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: NetConfigJson = serde_json::from_str(text).map_err(|e| {
            Error::InvalidConfig(format!(
                "malformed JSON at line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        let quadrics = raw
            .reducible_quadrics
            .into_iter()
            .map(|[a, b]| ReducibleQuadric::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        NetConfig::new(quadrics)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NetConfigJson {
            reducible_quadrics: self
                .reducible_quadrics
                .iter()
                .map(ReducibleQuadric::one_based)
                .collect(),
        })
        .expect("config serializes")
    }

    pub fn quadrics(&self) -> &[ReducibleQuadric] {
        &self.reducible_quadrics
    }

    /// Mordell–Weil rank `7 − d`.
    pub fn rank(&self) -> usize {
        7 - self.reducible_quadrics.len()
    }

    pub fn require_rank7(&self) -> Result<()> {
        match self.rank() {
            7 => Ok(()),
            r => Err(Error::RequiresRank7(r)),
        }
    }

    fn quadric(&self, index: usize) -> Result<&ReducibleQuadric> {
        index
            .checked_sub(1)
            .and_then(|i| self.reducible_quadrics.get(i))
            .ok_or_else(|| {
                Error::IndexOutOfRange(format!(
                    "quadric index {index} but the configuration lists {}",
                    self.reducible_quadrics.len()
                ))
            })
    }

    /// `Dᵃ_i = H − E_q − E_r − E_s − E_t`.
    pub fn vertical_divisor(&self, a: usize, index: usize) -> Result<DivisorClass> {
        check_component(a)?;
        Ok(DivisorClass::plane_through_set(self.quadric(index)?.part(a)))
    }

    /// `Fᵃ_i = 2l − l_q − l_r − l_s − l_t`.
    pub fn vertical_fibre_part(&self, a: usize, index: usize) -> Result<CurveClass> {
        check_component(a)?;
        Ok(CurveClass::conic_through_set(self.quadric(index)?.part(a)))
    }

    /// All fibre components `Fᵃ_i` of the configured reducible quadrics.
    pub fn all_vertical_fibre_parts(&self) -> Vec<CurveClass> {
        self.reducible_quadrics
            .iter()
            .flat_map(|q| [1, 2].map(|a| CurveClass::conic_through_set(q.part(a))))
            .collect()
    }

    pub fn all_vertical_divisors(&self) -> Vec<DivisorClass> {
        self.reducible_quadrics
            .iter()
            .flat_map(|q| [1, 2].map(|a| DivisorClass::plane_through_set(q.part(a))))
            .collect()
    }
}

fn check_component(a: usize) -> Result<()> {
    if a == 1 || a == 2 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!(
            "component index {a} must be 1 or 2"
        )))
    }
}

/// Symbolic names of the distinguished classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassName {
    H,
    E(usize),
    K,
    /// `f = −½K_X`
    AntiHalfK,
    /// `F`, the fibre class
    Fiber,
    /// `l`
    Line,
    /// `lᵢ`
    ExcLine(usize),
    C(usize, usize),
    D(usize, usize),
    R(usize, usize),
    /// `Dᵃ_i`
    Vertical { a: usize, index: usize },
    /// `Fᵃ_i`
    VerticalFibre { a: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedClass {
    Divisor(DivisorClass),
    Curve(CurveClass),
}

pub fn named_class(name: ClassName, config: &NetConfig) -> Result<NamedClass> {
    use ClassName::*;
    use NamedClass::{Curve, Divisor};
    Ok(match name {
        H => Divisor(DivisorClass::h()),
        E(i) => Divisor(DivisorClass::exceptional(i)?),
        K => Divisor(DivisorClass::canonical()),
        AntiHalfK => Divisor(DivisorClass::anti_half_canonical()),
        Fiber => Curve(CurveClass::fiber()),
        Line => Curve(CurveClass::line()),
        ExcLine(i) => Curve(CurveClass::exceptional_line(i)?),
        C(i, j) => Curve(CurveClass::secant_line(i, j)?),
        D(i, j) => Divisor(DivisorClass::plane_through(i, j)?),
        R(i, j) => Curve(CurveClass::residual_cubic(i, j)?),
        Vertical { a, index } => Divisor(config.vertical_divisor(a, index)?),
        VerticalFibre { a, index } => Curve(config.vertical_fibre_part(a, index)?),
    })
}

/// Image `[D]` of a divisor in N¹(X/P²), in the basis `[E₁], …, [E₈]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelativeClass {
    pub beta: [Rational; POINTS],
}

impl RelativeClass {
    pub fn zero() -> Self {
        RelativeClass { beta: zeros8() }
    }

    /// `[D]·F = Σ βᵢ`.
    pub fn degree(&self) -> Rational {
        self.beta.iter().fold(Rational::zero(), |acc, b| acc + b)
    }

    pub fn is_zero(&self) -> bool {
        self.beta.iter().all(Zero::is_zero)
    }

    /// The lift `Σ βᵢEᵢ`; any other lift differs by a multiple of `f`.
    pub fn lift(&self) -> DivisorClass {
        DivisorClass {
            a: Rational::zero(),
            c: self.beta.clone(),
        }
    }

    /// Pairing with a K-trivial (fibral) curve class.
    pub fn pair_fibral(&self, g: &CurveClass) -> Rational {
        pair(&self.lift(), g)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RelativeClass {
            beta: std::array::from_fn(|i| &self.beta[i] * k),
        }
    }
}

impl Neg for &RelativeClass {
    type Output = RelativeClass;
    fn neg(self) -> RelativeClass {
        RelativeClass {
            beta: std::array::from_fn(|i| -&self.beta[i]),
        }
    }
}

impl Add for &RelativeClass {
    type Output = RelativeClass;
    fn add(self, rhs: &RelativeClass) -> RelativeClass {
        RelativeClass {
            beta: std::array::from_fn(|i| &self.beta[i] + &rhs.beta[i]),
        }
    }
}

/// `βᵢ = a/2 + cᵢ`; the kernel is spanned by `f`.
pub fn relative_project(d: &DivisorClass) -> RelativeClass {
    let half_a = &d.a / rat(2);
    RelativeClass {
        beta: std::array::from_fn(|i| &half_a + &d.c[i]),
    }
}

/// Membership in the relative effective cone: positive fibre degree, zero, or
/// a nonnegative combination of the vertical classes `[Dᵃ_i]`.
pub fn relative_effective_member(x: &RelativeClass, config: &NetConfig) -> bool {
    if x.degree().is_positive() || x.is_zero() {
        return true;
    }
    let verticals: Vec<RelativeClass> = config
        .all_vertical_divisors()
        .iter()
        .map(relative_project)
        .collect();
    if verticals.is_empty() {
        return false;
    }
    let mut lp = LinearProgram::new(verticals.len());
    for i in 0..POINTS {
        let row = verticals.iter().map(|v| v.beta[i].clone()).collect();
        lp.add(row, Relation::Eq, x.beta[i].clone());
    }
    lp.solve().is_feasible()
}

/// Membership in the relative effective movable cone: zero, or positive
/// fibre degree and nonnegative on every fibre component `Fᵃ_i`.
pub fn relative_movable_member(x: &RelativeClass, config: &NetConfig) -> bool {
    if x.is_zero() {
        return true;
    }
    x.degree().is_positive()
        && config
            .all_vertical_fibre_parts()
            .iter()
            .all(|g| !x.pair_fibral(g).is_negative())
}
