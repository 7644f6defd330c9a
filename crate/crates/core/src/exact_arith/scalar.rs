use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

/// Characteristic of a prime field: 0 for the rationals, otherwise a prime.
pub type Char = u64;

/// Checks that `p` is 0 or a prime.
pub fn check_char(p: Char) -> Result<()> {
    if p == 0 || is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// An element of a prime field: an exact rational (characteristic 0) or a
/// residue modulo a prime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(ch: Char) -> Self {
        Self::from_i64(0, ch)
    }

    pub fn one(ch: Char) -> Self {
        Self::from_i64(1, ch)
    }

    pub fn from_i64(v: i64, ch: Char) -> Self {
        if ch == 0 {
            Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
        } else {
            Scalar::Residue { value: v.rem_euclid(ch as i64) as u64, modulus: ch }
        }
    }

    pub fn from_bigint(v: &BigInt, ch: Char) -> Self {
        if ch == 0 {
            Scalar::Rational(BigRational::from_integer(v.clone()))
        } else {
            Scalar::Residue { value: reduce_bigint(v, ch), modulus: ch }
        }
    }

    /// Reduces a rational into the field of characteristic `ch`; fails when the
    /// denominator vanishes there.
    pub fn from_rational(q: &BigRational, ch: Char) -> Result<Self> {
        if ch == 0 {
            return Ok(Scalar::Rational(q.clone()));
        }
        let num = reduce_bigint(q.numer(), ch);
        let den = reduce_bigint(q.denom(), ch);
        if den == 0 {
            return Err(Error::NotReducible(q.to_string(), ch));
        }
        let value = mul_mod(num, inv_mod(den, ch), ch);
        Ok(Scalar::Residue { value, modulus: ch })
    }

    pub fn char(&self) -> Char {
        match self {
            Scalar::Rational(_) => 0,
            Scalar::Residue { modulus, .. } => *modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: inv_mod(*value, *modulus), modulus: *modulus }
            }
        })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    /// Integer representative: the numerator for integral rationals, the
    /// residue in `[0, p)` otherwise.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.numer().clone()),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(BigInt::from(*value)),
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Total order used for canonical representatives: numeric order on
    /// rationals, integer order on residues in `[0, p)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) => a.cmp(b),
            (Scalar::Rational(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    fn same_char(&self, other: &Self) {
        assert_eq!(self.char(), other.char(), "scalar characteristics differ");
    }
}

/// `v mod p` in `[0, p)`.
pub fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits in u64")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Residue { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.same_char(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.same_char(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: mul_mod(*a, *b, *modulus), modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
        }
    }
}

/// Parses `"n"` or `"n/d"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational: {s:?}") };
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `"num/den"` (always with a denominator).
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn sign(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Serde helper writing a rational as a `"num/den"` string.
pub fn serialize_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

pub fn serialize_rationals<S: serde::Serializer>(qs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(rational_string))
}
