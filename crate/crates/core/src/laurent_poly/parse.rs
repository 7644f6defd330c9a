//! Text and JSON forms of Laurent polynomials.
//!
//! Text grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*      (juxtaposition multiplies)
//! factor := atom ['^' ['-'] digits]
//! atom   := digits | 'v' | 'w' | '(' expr ')'
//! ```
//!
//! Division and negative powers are only allowed by units (single terms).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::exact_arith::{check_char, parse_rational, Char, Scalar};

const MAX_EXPONENT: u32 = 1000;
const MAX_ABS_DEGREE: i64 = 1 << 20;
const MAX_TERMS: usize = 1 << 14;
const MAX_WORK: usize = 1 << 22;
const MAX_COEFF_BITS: u64 = 1 << 14;
const MAX_DEPTH: usize = 200;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ch: Char,
    depth: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Parses the text form in characteristic `ch`.
pub fn parse_text(text: &str, ch: Char) -> Result<LaurentPoly> {
    check_char(ch)?;
    let mut p = Parser { src: text.as_bytes(), pos: 0, ch, depth: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(err(p.pos, format!("unexpected character {:?}", p.src[p.pos] as char)));
    }
    Ok(out)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(err(self.pos, "nesting too deep"));
        }
        let mut acc = LaurentPoly::zero(self.ch);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t)? } else { acc.add(&t)? };
            check_size(&acc, self.pos)?;
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = checked_mul(&acc, &f, self.pos)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    let inv = unit_inverse(&f).ok_or_else(|| err(at, "can only divide by a nonzero single term"))?;
                    acc = checked_mul(&acc, &inv, self.pos)?;
                }
                Some(c) if c.is_ascii_digit() || c == b'v' || c == b'w' || c == b'(' => {
                    let f = self.factor()?;
                    acc = checked_mul(&acc, &f, self.pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let digits = self.digits()?;
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| err(at, format!("exponent must be at most {MAX_EXPONENT}")))?;
        let base = if negative {
            unit_inverse(&base).ok_or_else(|| err(at, "negative powers need a nonzero single term"))?
        } else {
            base
        };
        estimate_power(&base, e, at)?;
        let mut acc = LaurentPoly::constant(Scalar::one(self.ch));
        for _ in 0..e {
            acc = checked_mul(&acc, &base, self.pos)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let one = Scalar::one(self.ch);
        match self.peek() {
            Some(b'v') => {
                self.pos += 1;
                Ok(LaurentPoly::monomial(one, (1, 0)))
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(LaurentPoly::monomial(one, (0, 1)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: BigInt = d.parse().map_err(|_| err(self.pos, "bad integer"))?;
                Ok(LaurentPoly::constant(Scalar::from_bigint(&n, self.ch)))
            }
            Some(c) => Err(err(self.pos, format!("unexpected character {:?}", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected digits"));
        }
        if self.pos - start > 4096 {
            return Err(err(start, "integer literal too long"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

fn unit_inverse(f: &LaurentPoly) -> Option<LaurentPoly> {
    if !f.is_unit() {
        return None;
    }
    let (&(a, b), c) = f.terms().iter().next()?;
    Some(LaurentPoly::monomial(c.inv()?, (-a, -b)))
}

/// Rejects powers whose result would exceed the size limits, before any work.
fn estimate_power(base: &LaurentPoly, e: u32, pos: usize) -> Result<()> {
    if base.is_empty() || e == 0 {
        return Ok(());
    }
    let e = e as i64;
    let xs = base.terms().keys().map(|t| t.0);
    let ys = base.terms().keys().map(|t| t.1);
    let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let span = |lo: i64, hi: i64| (hi - lo).saturating_mul(e).saturating_add(1);
    if span(x0, x1).saturating_mul(span(y0, y1)) > MAX_TERMS as i64 {
        return Err(err(pos, "power has too many terms"));
    }
    let reach = x0.abs().max(x1.abs()).max(y0.abs()).max(y1.abs()).saturating_mul(e);
    if reach > MAX_ABS_DEGREE {
        return Err(err(pos, "exponent out of range"));
    }
    let bits = base
        .terms()
        .values()
        .filter_map(|c| c.as_rational())
        .map(|q| q.numer().bits().max(q.denom().bits()))
        .max()
        .unwrap_or(0);
    let growth = (bits + 64 - (base.len() as u64).leading_zeros() as u64).saturating_mul(e as u64);
    if growth > MAX_COEFF_BITS {
        return Err(err(pos, "coefficient too large"));
    }
    Ok(())
}

fn checked_mul(a: &LaurentPoly, b: &LaurentPoly, pos: usize) -> Result<LaurentPoly> {
    if a.len().saturating_mul(b.len()) > MAX_WORK {
        return Err(err(pos, "expression too large"));
    }
    let out = a.multiply(b)?;
    check_size(&out, pos)?;
    Ok(out)
}

fn check_size(p: &LaurentPoly, pos: usize) -> Result<()> {
    if p.len() > MAX_TERMS {
        return Err(err(pos, "too many terms"));
    }
    for (&(a, b), c) in p.terms() {
        if a.abs() > MAX_ABS_DEGREE || b.abs() > MAX_ABS_DEGREE {
            return Err(err(pos, "exponent out of range"));
        }
        if let Some(q) = c.as_rational() {
            if q.numer().bits() > MAX_COEFF_BITS || q.denom().bits() > MAX_COEFF_BITS {
                return Err(err(pos, "coefficient too large"));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    a: i64,
    b: i64,
    c: Value,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    char: u64,
    terms: Vec<TermJson>,
}

/// `{"char": p, "terms": [{"a": .., "b": .., "c": "num/den"}]}`; residues
/// are written as plain integers in `[0, p)`.
pub fn to_json(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|(&(a, b), c)| {
            let c = match c {
                Scalar::Rational(q) => crate::exact_arith::rational_string(q),
                Scalar::Residue { value, .. } => value.to_string(),
            };
            serde_json::json!({"a": a, "b": b, "c": c})
        })
        .collect();
    serde_json::json!({"char": p.char(), "terms": terms})
}

pub fn parse_json(text: &str) -> Result<LaurentPoly> {
    let raw: PolyJson = serde_json::from_str(text).map_err(|e| err(e.column(), e.to_string()))?;
    check_char(raw.char)?;
    if raw.terms.len() > MAX_TERMS {
        return Err(err(0, "too many terms"));
    }
    let mut out = LaurentPoly::zero(raw.char);
    for t in raw.terms {
        if t.a.abs() > MAX_ABS_DEGREE || t.b.abs() > MAX_ABS_DEGREE {
            return Err(err(0, "exponent out of range"));
        }
        let q = match &t.c {
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) => match n.as_i64() {
                Some(i) => num_rational::BigRational::from_integer(BigInt::from(i)),
                None => return Err(err(0, format!("coefficient {n} is not an integer"))),
            },
            other => return Err(err(0, format!("bad coefficient {other}"))),
        };
        if q.numer().bits() > MAX_COEFF_BITS || q.denom().bits() > MAX_COEFF_BITS {
            return Err(err(0, "coefficient too large"));
        }
        if q.is_zero() {
            continue;
        }
        let c = Scalar::from_rational(&q, raw.char)?;
        out.add_term((t.a, t.b), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_examples() {
        let p = parse_text("v*w - 1", 0).unwrap();
        assert_eq!(p.support(), vec![(0, 0), (1, 1)]);
        assert_eq!(p.coeff((0, 0)), Scalar::from_i64(-1, 0));
        let q = parse_text("-1 + 5vw - 3v^2w + v^3w - 2vw^2 - v^2w^2 + v^2w^3", 0).unwrap();
        assert_eq!(q.len(), 7);
        assert_eq!(parse_text("-1 + 5vw - 3v^2w + v^3w - 2vw^2 - v^2w^2 + v^2w^3", 2).unwrap().len(), 6);
        assert_eq!(parse_text("3/2*v", 0).unwrap().to_string(), "3/2*v");
        assert_eq!(parse_text("v^-2 w", 0).unwrap().support(), vec![(-2, 1)]);
        assert!(parse_text("1/2", 2).is_err());
        assert_eq!(parse_text("1/2 + 1/2", 3).unwrap(), parse_text("1", 3).unwrap());
    }

    #[test]
    fn text_errors() {
        for bad in ["", "v +", "(v", "x", "v^1001", "1/(v+1)", "(v+w)^-1", "v^^2", "2 3 )"] {
            assert!(parse_text(bad, 0).is_err(), "{bad}");
        }
        assert!(parse_text("(1+v+w)^1000", 0).is_err());
        assert!(parse_text("(99999999999999999999*v)^1000", 0).is_err());
        assert_eq!(parse_text("v", 4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn json_examples() {
        let p = parse_json(r#"{"char": 0, "terms": [{"a":1,"b":1,"c":"1/1"},{"a":0,"b":0,"c":-1}]}"#).unwrap();
        assert_eq!(p, parse_text("vw-1", 0).unwrap());
        let j = to_json(&p).to_string();
        assert!(j.contains("\"c\":\"-1/1\""));
        assert!(parse_json(r#"{"char": 2, "terms": [{"a":0,"b":0,"c":"1/2"}]}"#).is_err());
        assert!(parse_json(r#"{"char": 6, "terms": []}"#).is_err());
    }
}
