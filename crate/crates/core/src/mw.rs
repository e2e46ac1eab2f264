//! Mordell–Weil translations in the rank-7 case.
//!
//! The subgroup `G` generated by `Eⱼ − E₁` acts on N¹(X) by
//! `ψ_y(x) = x + (x·F)y + m(x,y)f` with
//! `m(x,y) = −(T(x,y,f) + (x·F)·q(y)/2)` and `q(y) = T(y,y,f)`. This is the
//! Eichler transvection attached to the isotropic vector `f` and `y ∈ f^⊥`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{floor, rat, Rational};
use crate::error::{Error, Result};
use crate::model::{
    pair, relative_project, triple, CurveClass, DivisorClass, N1_DIM, POINTS,
};

/// `y = Σⱼ nⱼ(Eⱼ − E₁)` for `j = 2..8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct MWElement {
    pub n: [i64; 7],
}

impl MWElement {
    pub fn zero() -> Self {
        MWElement::default()
    }

    pub fn new(n: [i64; 7]) -> Self {
        MWElement { n }
    }

    /// `Eⱼ − E₁` for `j ∈ 2..=8`.
    pub fn generator(j: usize) -> Result<Self> {
        if !(2..=POINTS).contains(&j) {
            return Err(Error::IndexOutOfRange(format!(
                "generator index {j} is outside 2..=8"
            )));
        }
        let mut n = [0; 7];
        n[j - 2] = 1;
        Ok(MWElement { n })
    }

    pub fn is_zero(&self) -> bool {
        self.n.iter().all(|&x| x == 0)
    }

    /// The divisor class `Σ nⱼ(Eⱼ − E₁)`.
    pub fn divisor(&self) -> DivisorClass {
        let mut c = [0i64; POINTS];
        c[0] = -self.n.iter().sum::<i64>();
        c[1..].copy_from_slice(&self.n);
        DivisorClass::from_ints(0, c)
    }

    /// `q(y) = y·y·f`, always even and nonpositive.
    pub fn q(&self) -> i64 {
        let s: i64 = self.n.iter().sum();
        -(s * s + self.n.iter().map(|x| x * x).sum::<i64>())
    }

    /// Accepts `{"n": [n2, …, n8]}` or the bare array.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Object(MWElement),
            Array([i64; 7]),
        }
        match serde_json::from_str(text) {
            Ok(Form::Object(y)) => Ok(y),
            Ok(Form::Array(n)) => Ok(MWElement { n }),
            Err(_) => {
                let detail = serde_json::from_str::<serde_json::Value>(text)
                    .err()
                    .map(|e| (e.column().saturating_sub(1), format!(": {e}")))
                    .unwrap_or((0, String::new()));
                Err(Error::Parse {
                    position: detail.0,
                    message: format!("expected [n2, ..., n8] or {{\"n\": [n2, ..., n8]}}{}", detail.1),
                })
            }
        }
    }
}

impl Add for MWElement {
    type Output = MWElement;
    fn add(self, rhs: MWElement) -> MWElement {
        MWElement {
            n: std::array::from_fn(|i| self.n[i] + rhs.n[i]),
        }
    }
}

impl Neg for MWElement {
    type Output = MWElement;
    fn neg(self) -> MWElement {
        MWElement { n: self.n.map(|x| -x) }
    }
}

impl Sub for MWElement {
    type Output = MWElement;
    fn sub(self, rhs: MWElement) -> MWElement {
        self + (-rhs)
    }
}

impl fmt::Display for MWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.divisor())
    }
}

pub type Matrix9 = [[i128; N1_DIM]; N1_DIM];

/// `ψ_y` as an integer matrix acting on divisor coordinates `(a; c₁..c₈)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transvection {
    pub y: MWElement,
    pub matrix: Matrix9,
}

impl Transvection {
    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let x = d.coords();
        let out: Vec<Rational> = (0..N1_DIM)
            .map(|r| {
                (0..N1_DIM).fold(Rational::zero(), |acc, k| {
                    acc + Rational::from_integer(BigInt::from(self.matrix[r][k])) * &x[k]
                })
            })
            .collect();
        DivisorClass::from_coords(&crate::arith::RationalVector::new(out)).expect("9 coordinates")
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity()
    }
}

pub fn identity() -> Matrix9 {
    std::array::from_fn(|r| std::array::from_fn(|c| i128::from(r == c)))
}

pub fn mat_mul(a: &Matrix9, b: &Matrix9) -> Matrix9 {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| (0..N1_DIM).map(|k| a[r][k] * b[k][c]).sum())
    })
}

/// The vertical coefficient `m(x,y)`.
pub fn vertical_coefficient(y: &MWElement, x: &DivisorClass) -> Rational {
    let f = DivisorClass::anti_half_canonical();
    let deg = pair(x, &CurveClass::fiber());
    -(triple(x, &y.divisor(), &f) + deg * rat(y.q()) / rat(2))
}

/// `ψ_y(D)`.
pub fn act(y: &MWElement, d: &DivisorClass) -> DivisorClass {
    if y.is_zero() {
        return d.clone();
    }
    let deg = pair(d, &CurveClass::fiber());
    let m = vertical_coefficient(y, d);
    let f = DivisorClass::anti_half_canonical();
    &(d + &y.divisor().scale(&deg)) + &f.scale(&m)
}

pub fn transvection(y: &MWElement) -> Transvection {
    let mut matrix = [[0i128; N1_DIM]; N1_DIM];
    for k in 0..N1_DIM {
        let mut e = [0i64; N1_DIM];
        e[k] = 1;
        let basis = DivisorClass::from_ints(e[0], std::array::from_fn(|i| e[i + 1]));
        let image = act(y, &basis);
        for (r, v) in image.int_coords().iter().enumerate() {
            matrix[r][k] = v.to_i128().expect("transvection entry fits in i128");
        }
    }
    Transvection { y: *y, matrix }
}

/// `ψ_{y₁}·ψ_{y₂} = ψ_{y₁+y₂}` as matrices.
pub fn compose_check(y1: &MWElement, y2: &MWElement) -> bool {
    let lhs = mat_mul(&transvection(y1).matrix, &transvection(y2).matrix);
    lhs == transvection(&(*y1 + *y2)).matrix
}

/// Contragredient action on curve classes, so that
/// `pair(act(y, D), act_curve(y, γ)) = pair(D, γ)`.
///
/// With `J = diag(1, −1, …, −1)` the image is `J·M(−y)ᵀ·J·γ`.
pub fn act_curve(y: &MWElement, g: &CurveClass) -> CurveClass {
    if y.is_zero() {
        return g.clone();
    }
    let inv = transvection(&-*y).matrix;
    let sign = |i: usize| if i == 0 { 1i128 } else { -1 };
    let x = g.coords();
    let out: Vec<Rational> = (0..N1_DIM)
        .map(|r| {
            (0..N1_DIM).fold(Rational::zero(), |acc, k| {
                let entry = sign(r) * inv[k][r] * sign(k);
                acc + Rational::from_integer(BigInt::from(entry)) * &x[k]
            })
        })
        .collect();
    CurveClass::from_coords(&crate::arith::RationalVector::new(out)).expect("9 coordinates")
}

/// `αⱼ = βⱼ / (D·F)` for the relative class of `D`.
pub fn normalized_alpha(d: &DivisorClass) -> Result<[Rational; POINTS]> {
    let s = pair(d, &CurveClass::fiber());
    if s <= Rational::zero() {
        return Err(Error::NotRelativelyMovable);
    }
    let beta = relative_project(d).beta;
    Ok(std::array::from_fn(|i| &beta[i] / &s))
}

/// Translates `D` into the half-open cone over Π, where `0 ≤ αⱼ < 1` for
/// `j = 2..8`. Returns the translating element and the image.
pub fn normalize_to_pi(d: &DivisorClass) -> Result<(MWElement, DivisorClass)> {
    let alpha = normalized_alpha(d)?;
    let mut n = [0i64; 7];
    for j in 1..POINTS {
        n[j - 1] = -floor(&alpha[j])
            .to_i64()
            .ok_or_else(|| Error::IndexOutOfRange("translation exceeds i64".into()))?;
    }
    let y = MWElement { n };
    Ok((y, act(&y, d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::model::fibre_form;

    fn e(i: usize) -> DivisorClass {
        DivisorClass::exceptional(i).unwrap()
    }

    fn g(j: usize) -> MWElement {
        MWElement::generator(j).unwrap()
    }

    #[test]
    fn sections_map_to_sections() {
        for j in 2..=8 {
            assert_eq!(act(&g(j), &e(1)), e(j));
        }
    }

    #[test]
    fn worked_plane_image() {
        let d34 = DivisorClass::plane_through(3, 4).unwrap();
        let img = act(&g(2), &d34);
        assert_eq!(img, DivisorClass::from_ints(5, [-4, 0, -3, -3, -2, -2, -2, -2]));
        // x + 2y + 2f
        let f = DivisorClass::anti_half_canonical();
        let expected = &(&d34 + &g(2).divisor().scale(&rat(2))) + &f.scale(&rat(2));
        assert_eq!(img, expected);
        assert_eq!(fibre_form(&img), fibre_form(&d34));
        assert_eq!(vertical_coefficient(&g(2), &d34), rat(2));
    }

    #[test]
    fn relative_translation_of_e2() {
        let beta = relative_project(&act(&g(2), &e(2))).beta;
        let mut expected = [0i64; 8];
        expected[0] = -1;
        expected[1] = 2;
        assert_eq!(beta, expected.map(rat));
    }

    #[test]
    fn fixes_f_and_inverts() {
        let f = DivisorClass::anti_half_canonical();
        let y = MWElement::new([3, -1, 0, 2, 0, 0, -5]);
        assert_eq!(act(&y, &f), f);
        let d = DivisorClass::from_ints(7, [-1, -2, 0, -3, 1, 0, -4, 2]);
        assert_eq!(act(&y, &act(&-y, &d)), d);
        assert!(transvection(&MWElement::zero()).is_identity());
    }

    #[test]
    fn composition() {
        assert!(compose_check(&g(2), &g(3)));
        let y = MWElement::new([1, 2, -3, 0, 4, -1, 0]);
        assert!(compose_check(&y, &-y));
        let prod = mat_mul(&transvection(&y).matrix, &transvection(&-y).matrix);
        assert_eq!(prod, identity());
    }

    #[test]
    fn curve_action_preserves_pairing() {
        let y = MWElement::new([2, 0, -1, 0, 0, 3, 1]);
        let d = DivisorClass::from_ints(3, [-1, 0, -2, 0, -1, 0, 0, -1]);
        let c = CurveClass::secant_line(2, 5).unwrap();
        assert_eq!(pair(&act(&y, &d), &act_curve(&y, &c)), pair(&d, &c));
        assert_eq!(act_curve(&y, &CurveClass::fiber()), CurveClass::fiber());
    }

    #[test]
    fn normalize_worked_example() {
        let d = act(&g(2), &DivisorClass::plane_through(3, 4).unwrap());
        let alpha = normalized_alpha(&d).unwrap();
        assert_eq!(
            alpha.to_vec(),
            vec![
                ratio(-3, 4),
                ratio(5, 4),
                ratio(-1, 4),
                ratio(-1, 4),
                ratio(1, 4),
                ratio(1, 4),
                ratio(1, 4),
                ratio(1, 4)
            ]
        );
        let (y, dn) = normalize_to_pi(&d).unwrap();
        assert_eq!(y, MWElement::new([-1, 1, 1, 0, 0, 0, 0]));
        let an = normalized_alpha(&dn).unwrap();
        assert_eq!(
            an[1..].to_vec(),
            vec![ratio(1, 4), ratio(3, 4), ratio(3, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)]
        );
        assert!(normalize_to_pi(&dn).unwrap().0.is_zero());
    }

    #[test]
    fn normalize_anchor_and_errors() {
        let anchor = &e(1) + &DivisorClass::anti_half_canonical();
        let (y, dn) = normalize_to_pi(&anchor).unwrap();
        assert!(y.is_zero());
        assert_eq!(dn, anchor);
        assert_eq!(
            normalize_to_pi(&DivisorClass::anti_half_canonical()),
            Err(Error::NotRelativelyMovable)
        );
    }

    #[test]
    fn json_roundtrip() {
        let y = MWElement::from_json(r#"{"n": [1,0,0,0,0,0,-2]}"#).unwrap();
        assert_eq!(y.n, [1, 0, 0, 0, 0, 0, -2]);
        assert_eq!(serde_json::to_string(&y).unwrap(), r#"{"n":[1,0,0,0,0,0,-2]}"#);
        assert!(MWElement::from_json(r#"{"n": [1,2]}"#).is_err());
    }
}
