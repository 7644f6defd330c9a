//! Laurent polynomials in `v, w` over the rationals or a prime field.

mod parse;

pub use parse::{parse_json, parse_text, to_json};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact_arith::{binomial_row, check_char, Char, Scalar};
use crate::lattice_geom::{convex_hull, IntegralPolygon, LatticePoint, UnimodularAffineMap};

/// Finitely supported map from exponents to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ch: Char,
    terms: BTreeMap<LatticePoint, Scalar>,
}

/// Coefficients of the expansion at `(1,1)`: the entry for `(i, j)` is the
/// coefficient of `s^i t^j` after substituting `v = 1+s`, `w = 1+t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetVector {
    pub r: usize,
    pub entries: Vec<Scalar>,
}

/// Position of `(i, j)`, `i + j < r`, in the order by `i + j` then `i`.
pub fn jet_index(i: usize, j: usize) -> usize {
    let s = i + j;
    s * (s + 1) / 2 + i
}

/// The `(i, j)` pairs with `i + j < r` in jet order.
pub fn jet_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect()
}

impl JetVector {
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[jet_index(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }
}

impl LaurentPoly {
    pub fn zero(ch: Char) -> Self {
        LaurentPoly { ch, terms: BTreeMap::new() }
    }

    pub fn monomial(c: Scalar, e: LatticePoint) -> Self {
        let mut p = Self::zero(c.char());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn from_terms(ch: Char, terms: impl IntoIterator<Item = (LatticePoint, Scalar)>) -> Result<Self> {
        check_char(ch)?;
        let mut p = Self::zero(ch);
        for (e, c) in terms {
            if c.char() != ch {
                return Err(Error::CharMismatch(c.char(), ch));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn from_i64_terms(ch: Char, terms: &[(LatticePoint, i64)]) -> Self {
        Self::from_terms(ch, terms.iter().map(|&(e, c)| (e, Scalar::from_i64(c, ch)))).expect("valid characteristic")
    }

    fn add_term(&mut self, e: LatticePoint, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn char(&self) -> Char {
        self.ch
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, Scalar> {
        &self.terms
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, e: LatticePoint) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(|| Scalar::zero(self.ch))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single nonzero term, i.e. a unit of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn same_char(&self, other: &Self) -> Result<()> {
        if self.ch != other.ch {
            return Err(Error::CharMismatch(self.ch, other.ch));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_char(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { ch: self.ch, terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.ch);
        for (&e, x) in &self.terms {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_char(other)?;
        let mut out = Self::zero(self.ch);
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Scalar::one(self.ch));
        for _ in 0..n {
            acc = acc.multiply(self).expect("same characteristic");
        }
        acc
    }

    /// Multiplication by the unit `c v^a w^b`.
    pub fn unit_multiply(&self, c: &Scalar, e: LatticePoint) -> Result<Self> {
        if c.char() != self.ch {
            return Err(Error::CharMismatch(c.char(), self.ch));
        }
        if c.is_zero() {
            return Err(Error::Invalid("unit coefficient must be nonzero".into()));
        }
        Ok(LaurentPoly { ch: self.ch, terms: self.terms.iter().map(|(&(a, b), x)| ((a + e.0, b + e.1), x * c)).collect() })
    }

    /// Image in characteristic `p` of a rational polynomial.
    pub fn reduce_mod(&self, p: Char) -> Result<Self> {
        if self.ch == p {
            return Ok(self.clone());
        }
        if self.ch != 0 {
            return Err(Error::CharMismatch(self.ch, p));
        }
        check_char(p)?;
        let mut out = Self::zero(p);
        for (&e, c) in &self.terms {
            out.add_term(e, Scalar::from_rational(c.as_rational().unwrap(), p)?);
        }
        Ok(out)
    }

    pub fn newton_polygon(&self) -> Result<IntegralPolygon> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        convex_hull(&self.support())
    }

    /// Exponent action `(a, b) -> (a, b) M` of a unimodular matrix, matching
    /// the substitution `v -> v^m11 w^m12`, `w -> v^m21 w^m22`.
    pub fn apply_gl2z(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let map = UnimodularAffineMap::new(m, (0, 0))?;
        Ok(self.apply_affine(&map))
    }

    /// Exponent action of a unimodular affine map (linear part and unit shift).
    pub fn apply_affine(&self, map: &UnimodularAffineMap) -> Self {
        LaurentPoly { ch: self.ch, terms: self.terms.iter().map(|(&e, c)| (map.apply(e), c.clone())).collect() }
    }

    /// Smallest exponent in each coordinate.
    pub fn min_corner(&self) -> LatticePoint {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        (a, b)
    }

    /// Divides by the monomial `v^a w^b` with `(a, b)` the minimal corner, so the
    /// result is a polynomial not divisible by `v` or `w`.
    pub fn strip_monomial(&self) -> (LatticePoint, Self) {
        let (a, b) = self.min_corner();
        let q = LaurentPoly { ch: self.ch, terms: self.terms.iter().map(|(&(x, y), c)| ((x - a, y - b), c.clone())).collect() };
        ((a, b), q)
    }

    /// Jet entries for `i + j < r`, computed with generalized binomials.
    pub fn jet(&self, r: usize) -> JetVector {
        let pairs = jet_pairs(r);
        let mut acc = vec![BigAcc::default(); pairs.len()];
        for (&(a, b), c) in &self.terms {
            let (ba, bb) = (binomial_row(a, r), binomial_row(b, r));
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let m = &ba[i] * &bb[j];
                acc[k].add(c, &m);
            }
        }
        let entries = acc.into_iter().map(|a| a.finish(self.ch)).collect();
        JetVector { r, entries }
    }

    /// Largest `r` with the polynomial in `(v-1, w-1)^r`.
    pub fn multiplicity_at_one(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // Vanishing order is unchanged by the monomial shift, which keeps the
        // binomials small.
        let (_, q) = self.strip_monomial();
        let mut s = 0usize;
        loop {
            let r = s + 1;
            let rows: Vec<Vec<BigInt>> = q.terms.keys().map(|&(a, _)| binomial_row(a, r)).collect();
            let cols: Vec<Vec<BigInt>> = q.terms.keys().map(|&(_, b)| binomial_row(b, r)).collect();
            for i in 0..=s {
                let j = s - i;
                let mut acc = BigAcc::default();
                for (k, c) in q.terms.values().enumerate() {
                    acc.add(c, &(&rows[k][i] * &cols[k][j]));
                }
                if !acc.finish(self.ch).is_zero() {
                    return Ok(s);
                }
            }
            s += 1;
        }
    }

    /// `v * d/dv`.
    pub fn log_derivative_v(&self) -> Self {
        let mut out = Self::zero(self.ch);
        for (&(a, b), c) in &self.terms {
            out.add_term((a, b), &Scalar::from_i64(a, self.ch) * c);
        }
        out
    }

    /// Scales so that the coefficient at the lexicographically least exponent
    /// is `-1`.
    pub fn normalize_lead_minus_one(&self) -> Self {
        match self.terms.values().next() {
            None => self.clone(),
            Some(c) => {
                let minus = -&Scalar::one(self.ch);
                self.scale(&minus.div(c).unwrap())
            }
        }
    }
}

/// Accumulates `sum c_k * m_k` with integer `m_k`; coefficients are field
/// elements, so the integer factor is mapped into the field first.
#[derive(Clone, Default)]
struct BigAcc(Option<Scalar>);

impl BigAcc {
    fn add(&mut self, c: &Scalar, m: &BigInt) {
        let t = c * &Scalar::from_bigint(m, c.char());
        self.0 = Some(match self.0.take() {
            None => t,
            Some(s) => &s + &t,
        });
    }

    fn finish(self, ch: Char) -> Scalar {
        self.0.unwrap_or_else(|| Scalar::zero(ch))
    }
}

/// Serialized as the text form accepted by [`parse_text`].
impl serde::Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(a, b), c)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                Scalar::Rational(q) if q.is_negative() => (true, Scalar::Rational(-q)),
                _ => (false, c.clone()),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (a, b) == (0, 0) {
                parts.push(mag.to_string());
            }
            for (name, e) in [("v", a), ("w", b)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[char {}] {}", self.ch, self)
    }
}
