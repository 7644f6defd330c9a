//! Herzog's presentation data for the defining prime of the monomial space
//! curve `(t^a, t^b, t^c)`, and the rational triangle it determines.

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice_geom::{halfplane_polygon, rat, RationalPolygon};
use crate::toric_surface::Fan2D;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HerzogData {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub s: i64,
    pub s2: i64,
    pub s3: i64,
    pub t: i64,
    pub t1: i64,
    pub t3: i64,
    pub u: i64,
    pub u1: i64,
    pub u2: i64,
    pub i0: i64,
    pub j0: i64,
    /// `(a, b, c)` equals the input triple indexed by this permutation.
    pub permutation: [usize; 3],
    /// Whether `s, t, u` are the minimal multiples (always true outside the
    /// complete-intersection case).
    pub minimal: bool,
}

/// Decompositions `n = x*p + y*q` with `x, y >= 0`, by increasing `y`.
fn decompositions(n: i64, p: i64, q: i64) -> Vec<(i64, i64)> {
    (0..=n / q).filter(|k| (n - k * q) % p == 0).map(|k| ((n - k * q) / p, k)).collect()
}

fn in_semigroup(n: i64, p: i64, q: i64) -> bool {
    (0..=n / q).any(|k| (n - k * q) % p == 0)
}

fn minimal_multiple(x: i64, p: i64, q: i64) -> i64 {
    (1..).find(|&n| in_semigroup(n * x, p, q)).unwrap()
}

impl HerzogData {
    /// All defining identities, plus positivity of `s3`, `t3`, `u`.
    pub fn check(&self) -> bool {
        let h = self;
        let nonneg = [h.s2, h.s3, h.t1, h.t3, h.u1, h.u2].iter().all(|&x| x >= 0);
        nonneg
            && h.s == h.s2 + h.s3
            && h.t == h.t1 + h.t3
            && h.u == h.u1 + h.u2
            && h.s * h.a == h.t1 * h.b + h.u1 * h.c
            && h.t * h.b == h.s2 * h.a + h.u2 * h.c
            && h.u * h.c == h.s3 * h.a + h.t3 * h.b
            && h.a == h.t * h.u - h.t3 * h.u2
            && h.b == h.s2 * h.u + h.s3 * h.u2
            && h.s3 > 0
            && h.t3 > 0
            && h.u > 0
            && h.i0 * h.a + h.j0 * h.b == 1
    }

    /// The six exponents are all positive exactly outside the complete
    /// intersection case.
    pub fn all_positive(&self) -> bool {
        [self.s2, self.s3, self.t1, self.t3, self.u1, self.u2].iter().all(|&x| x > 0)
    }
}

fn bezout(a: i64, b: i64) -> (i64, i64) {
    let e = a.extended_gcd(&b);
    let i0 = e.x.rem_euclid(b);
    let j0 = (1 - i0 * a) / b;
    (i0, j0)
}

fn with_minimal(a: i64, b: i64, c: i64, perm: [usize; 3]) -> Option<HerzogData> {
    let s = minimal_multiple(a, b, c);
    let t = minimal_multiple(b, a, c);
    let u = minimal_multiple(c, a, b);
    let (i0, j0) = bezout(a, b);
    for (t1, u1) in decompositions(s * a, b, c) {
        for (s2, u2) in decompositions(t * b, a, c) {
            for (s3, t3) in decompositions(u * c, a, b) {
                let h = HerzogData { a, b, c, s, s2, s3, t, t1, t3, u, u1, u2, i0, j0, permutation: perm, minimal: true };
                if h.check() {
                    return Some(h);
                }
            }
        }
    }
    None
}

/// Complete-intersection fallback: `t` and `u` range upward, `s` is whatever
/// `s2 + s3` the decompositions produce.
fn with_search(a: i64, b: i64, c: i64, perm: [usize; 3]) -> Option<HerzogData> {
    let (i0, j0) = bezout(a, b);
    for t in 1..=a + c {
        for u in 1..=a + b {
            for (s2, u2) in decompositions(t * b, a, c) {
                for (s3, t3) in decompositions(u * c, a, b) {
                    if u2 > u || t3 > t {
                        continue;
                    }
                    let (t1, u1, s) = (t - t3, u - u2, s2 + s3);
                    let h = HerzogData { a, b, c, s, s2, s3, t, t1, t3, u, u1, u2, i0, j0, permutation: perm, minimal: false };
                    if h.check() {
                        return Some(h);
                    }
                }
            }
        }
    }
    None
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn herzog_data(a: i64, b: i64, c: i64) -> Result<HerzogData> {
    let bad = || Error::NotCoprime(a.max(0) as u64, b.max(0) as u64, c.max(0) as u64);
    if a <= 0 || b <= 0 || c <= 0 || a.gcd(&b) != 1 || a.gcd(&c) != 1 || b.gcd(&c) != 1 {
        return Err(bad());
    }
    if let Some(h) = with_minimal(a, b, c, [0, 1, 2]) {
        return Ok(h);
    }
    let input = [a, b, c];
    for perm in PERMUTATIONS {
        let (x, y, z) = (input[perm[0]], input[perm[1]], input[perm[2]]);
        if let Some(h) = with_minimal(x, y, z, perm).or_else(|| with_search(x, y, z, perm)) {
            return Ok(h);
        }
    }
    Err(Error::Invalid(format!("no Herzog presentation found for ({a}, {b}, {c})")))
}

/// The three constraints of `d P`: `<n, x> >= bound`.
pub fn constraints(h: &HerzogData, d: i64) -> [((i64, i64), BigRational); 3] {
    [
        ((h.s2, h.s3), rat(-h.i0 * d)),
        ((-h.t, h.t3), rat(-h.j0 * d)),
        ((h.u2, -h.u), rat(0)),
    ]
}

/// The rational triangle whose dilates index the graded pieces.
pub fn triangle(h: &HerzogData) -> Result<RationalPolygon> {
    halfplane_polygon(&constraints(h, 1))
}

/// `|d P ∩ Z^2|` by lattice-point enumeration.
pub fn graded_dimension(h: &HerzogData, d: i64) -> Result<usize> {
    if d < 0 {
        return Err(Error::Invalid("degree must be nonnegative".into()));
    }
    if d == 0 {
        return Ok(1);
    }
    Ok(triangle(h)?.dilate(d)?.lattice_points().total())
}

/// Number of monomials `x^i y^j z^k` with `i a + j b + k c = d`.
pub fn monomial_count(a: i64, b: i64, c: i64, d: i64) -> usize {
    let mut n = 0;
    for k in 0..=d / c {
        let rest = d - k * c;
        for j in 0..=rest / b {
            if (rest - j * b) % a == 0 {
                n += 1;
            }
        }
    }
    n
}

/// Fan with rays `(s2, s3)`, `(-t, t3)`, `(u2, -u)` made primitive.
pub fn fan(h: &HerzogData) -> Result<Fan2D> {
    Fan2D::new(vec![(h.s2, h.s3), (-h.t, h.t3), (h.u2, -h.u)])
}
