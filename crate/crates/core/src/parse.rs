//! Text syntax for classes: `2*f + E1`, `H - E1 - E2`, `(3/2)l - l1`, `D^1_2`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::model::{named_class, ClassName, CurveClass, DivisorClass, NamedClass, NetConfig, POINTS};

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') | Some('−') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn coefficient(&mut self) -> Result<Option<Rational>> {
        let num = self.digits();
        if num.is_empty() {
            return Ok(None);
        }
        let num: BigInt = num.parse().expect("ascii digits");
        self.skip_ws();
        let den = if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                return Err(self.error("expected a denominator"));
            }
            let d: BigInt = d.parse().expect("ascii digits");
            if d.is_zero() {
                return Err(self.error("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        self.skip_ws();
        if self.peek() == Some('*') {
            self.bump();
            self.skip_ws();
        }
        Ok(Some(Rational::new(num, den)))
    }

    /// A symbol: letters, then digits or a `^a_i` suffix.
    fn symbol(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a class symbol"));
        }
        if self.peek() == Some('^') {
            self.bump();
            if self.digits().is_empty() {
                return Err(self.error("expected a component index after `^`"));
            }
            if self.bump() != Some('_') {
                return Err(self.error("expected `_` and a quadric index"));
            }
            if self.digits().is_empty() {
                return Err(self.error("expected a quadric index after `_`"));
            }
        } else {
            self.digits();
        }
        Ok((start, &self.text[start..self.pos]))
    }
}

fn known_symbols() -> Vec<String> {
    let mut out: Vec<String> = ["H", "K", "f", "F", "l"].iter().map(|s| s.to_string()).collect();
    for i in 1..=POINTS {
        out.push(format!("E{i}"));
        out.push(format!("l{i}"));
    }
    for i in 1..=POINTS {
        for j in i + 1..=POINTS {
            for p in ["C", "D", "R"] {
                out.push(format!("{p}{i}{j}"));
            }
        }
    }
    out.extend(["D^1_1", "D^2_1", "F^1_1", "F^2_1"].iter().map(|s| s.to_string()));
    out
}

fn unknown(name: &str) -> Error {
    let suggestion = known_symbols()
        .into_iter()
        .map(|s| (strsim::levenshtein(name, &s), s))
        .filter(|(d, _)| *d <= 2)
        .min_by_key(|(d, _)| *d)
        .map(|(_, s)| s);
    Error::UnknownName {
        name: name.to_string(),
        suggestion,
    }
}

fn index(s: &str) -> Option<usize> {
    s.parse().ok()
}

/// `Dij`, `Cij`, `Rij` take two single-digit indices.
fn pair_indices(digits: &str) -> Option<(usize, usize)> {
    let b = digits.as_bytes();
    (b.len() == 2).then(|| ((b[0] - b'0') as usize, (b[1] - b'0') as usize))
}

pub fn symbol_name(sym: &str) -> Result<ClassName> {
    if let Some((head, rest)) = sym.split_once('^') {
        let (a, i) = rest.split_once('_').ok_or_else(|| unknown(sym))?;
        let (a, index) = (index(a).ok_or_else(|| unknown(sym))?, index(i).ok_or_else(|| unknown(sym))?);
        return match head {
            "D" => Ok(ClassName::Vertical { a, index }),
            "F" => Ok(ClassName::VerticalFibre { a, index }),
            _ => Err(unknown(sym)),
        };
    }
    let split = sym.find(|c: char| c.is_ascii_digit()).unwrap_or(sym.len());
    let (head, digits) = sym.split_at(split);
    let one = || index(digits).ok_or_else(|| unknown(sym));
    let two = || pair_indices(digits).ok_or_else(|| unknown(sym));
    match (head, digits.is_empty()) {
        ("H", true) => Ok(ClassName::H),
        ("K", true) => Ok(ClassName::K),
        ("f", true) => Ok(ClassName::AntiHalfK),
        ("F", true) => Ok(ClassName::Fiber),
        ("l", true) => Ok(ClassName::Line),
        ("E", false) => Ok(ClassName::E(one()?)),
        ("l", false) => Ok(ClassName::ExcLine(one()?)),
        ("C", false) => two().map(|(i, j)| ClassName::C(i, j)),
        ("D", false) => two().map(|(i, j)| ClassName::D(i, j)),
        ("R", false) => two().map(|(i, j)| ClassName::R(i, j)),
        _ => Err(unknown(sym)),
    }
}

/// Parses a signed sum of symbols with integer or rational coefficients.
/// Divisor and curve symbols cannot be mixed.
pub fn parse_class(text: &str, config: &NetConfig) -> Result<NamedClass> {
    let mut sc = Scanner { text, pos: 0 };
    let mut divisor: Option<DivisorClass> = None;
    let mut curve: Option<CurveClass> = None;
    let mut first = true;
    sc.skip_ws();
    if sc.peek().is_none() {
        return Err(sc.error("empty class expression"));
    }
    while sc.peek().is_some() {
        let negative = match sc.sign() {
            Some(n) => n,
            None if first => false,
            None => return Err(sc.error("expected `+` or `-`")),
        };
        first = false;
        sc.skip_ws();
        let mut coef = if sc.peek() == Some('(') {
            sc.bump();
            sc.skip_ws();
            let c = sc.coefficient()?.ok_or_else(|| sc.error("expected a coefficient"))?;
            if sc.bump() != Some(')') {
                return Err(sc.error("expected `)`"));
            }
            sc.skip_ws();
            if sc.peek() == Some('*') {
                sc.bump();
                sc.skip_ws();
            }
            c
        } else {
            sc.coefficient()?.unwrap_or_else(Rational::one)
        };
        if negative {
            coef = -coef;
        }
        let (_, sym) = sc.symbol()?;
        let class = named_class(symbol_name(sym)?, config)?;
        match class {
            NamedClass::Divisor(d) => {
                let d = d.scale(&coef);
                divisor = Some(divisor.map_or(d.clone(), |acc| &acc + &d));
            }
            NamedClass::Curve(c) => {
                let c = c.scale(&coef);
                curve = Some(curve.map_or(c.clone(), |acc| &acc + &c));
            }
        }
        if divisor.is_some() && curve.is_some() {
            return Err(Error::MixedSpaces(text.to_string()));
        }
        sc.skip_ws();
    }
    Ok(match (divisor, curve) {
        (Some(d), None) => NamedClass::Divisor(d),
        (None, Some(c)) => NamedClass::Curve(c),
        _ => unreachable!("at least one term and no mixing"),
    })
}

pub fn parse_divisor(text: &str, config: &NetConfig) -> Result<DivisorClass> {
    match parse_class(text, config)? {
        NamedClass::Divisor(d) => Ok(d),
        NamedClass::Curve(_) => Err(Error::Parse {
            position: 0,
            message: format!("`{text}` is a curve class; a divisor class is required"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Result<NamedClass> {
        parse_class(s, &NetConfig::generic())
    }

    #[test]
    fn plane_through_two_points() {
        assert_eq!(
            p("H - E1 - E2").unwrap(),
            NamedClass::Divisor(DivisorClass::plane_through(1, 2).unwrap())
        );
        assert_eq!(p("D12").unwrap(), p("H-E1-E2").unwrap());
    }

    #[test]
    fn scaled_anticanonical() {
        let d = DivisorClass::from_ints(4, [-1, -2, -2, -2, -2, -2, -2, -2]);
        assert_eq!(p("2*f + E1").unwrap(), NamedClass::Divisor(d.clone()));
        assert_eq!(p("2 f + E1").unwrap(), NamedClass::Divisor(d));
    }

    #[test]
    fn rational_and_unicode_minus() {
        let NamedClass::Curve(c) = p("3/2 l − l1").unwrap() else { panic!() };
        assert_eq!(c.e, Rational::new(3.into(), 2.into()));
        assert_eq!(c.d[0], Rational::from_integer((-1).into()));
        assert_eq!(p("(3/2)l - l1").unwrap(), NamedClass::Curve(c));
    }

    #[test]
    fn rejects_mixing_and_unknowns() {
        assert!(matches!(p("H + l1"), Err(Error::MixedSpaces(_))));
        match p("E10") {
            Err(Error::IndexOutOfRange(_)) | Err(Error::UnknownName { .. }) => {}
            other => panic!("{other:?}"),
        }
        match p("Hh") {
            Err(Error::UnknownName { suggestion, .. }) => assert_eq!(suggestion.as_deref(), Some("H")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p(""), Err(Error::Parse { .. })));
        assert!(matches!(p("H E1"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(p("3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn vertical_symbols_need_a_reducible_quadric() {
        assert!(p("D^1_1").is_err());
        let cfg = NetConfig::from_json(r#"{"reducible_quadrics": [[[1,2,3,4],[5,6,7,8]]]}"#).unwrap();
        let d = parse_class("D^1_1", &cfg).unwrap();
        assert_eq!(d, p("H - E1 - E2 - E3 - E4").unwrap());
    }
}
