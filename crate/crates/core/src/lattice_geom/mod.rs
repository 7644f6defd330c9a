//! Exact convex geometry of lattice and rational polygons in the plane.

mod halfplane;
mod minkowski;
mod normalize;

pub use halfplane::halfplane_polygon;
pub use minkowski::{brunn_minkowski_holds, minkowski_decompositions, minkowski_sum, Decomposition};
pub use normalize::{in_omega, normalize, normalizing_map, UnimodularAffineMap};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact_arith::parse_rational;

/// Exponent pair `(a, b)` of the monomial `v^a w^b`.
pub type LatticePoint = (i64, i64);

pub type RationalPoint = (BigRational, BigRational);

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn cross<T: Num + Clone>(o: &(T, T), a: &(T, T), b: &(T, T)) -> T {
    (a.0.clone() - o.0.clone()) * (b.1.clone() - o.1.clone()) - (a.1.clone() - o.1.clone()) * (b.0.clone() - o.0.clone())
}

/// Monotone chain; counterclockwise, starting at the lexicographically least
/// point, collinear points dropped.
fn hull_generic<T: Num + Clone + Ord>(mut pts: Vec<(T, T)>) -> Vec<(T, T)> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(T, T)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= T::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(T, T)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= T::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn dimension_of(n: usize) -> u8 {
    match n {
        0 | 1 => 0,
        2 => 1,
        _ => 2,
    }
}

/// Lattice points of a polygon, lexicographically sorted, with the boundary
/// and interior split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCount {
    pub points: Vec<LatticePoint>,
    pub boundary: usize,
    pub interior: usize,
}

impl LatticeCount {
    pub fn total(&self) -> usize {
        self.points.len()
    }
}

/// Convex lattice polygon, possibly a segment or a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralPolygon {
    vertices: Vec<LatticePoint>,
}

pub fn convex_hull(points: &[LatticePoint]) -> Result<IntegralPolygon> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let wide: Vec<(i128, i128)> = points.iter().map(|&(a, b)| (a as i128, b as i128)).collect();
    let vertices = hull_generic(wide).into_iter().map(|(a, b)| (a as i64, b as i64)).collect();
    Ok(IntegralPolygon { vertices })
}

impl IntegralPolygon {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> u8 {
        dimension_of(self.vertices.len())
    }

    pub fn require_2d(&self) -> Result<()> {
        match self.dimension() {
            2 => Ok(()),
            d => Err(Error::Degenerate(d)),
        }
    }

    /// Twice the Euclidean area.
    pub fn area2(&self) -> i64 {
        if self.dimension() < 2 {
            return 0;
        }
        let n = self.vertices.len();
        let s: i128 = (0..n)
            .map(|i| {
                let (x1, y1) = self.vertices[i];
                let (x2, y2) = self.vertices[(i + 1) % n];
                x1 as i128 * y2 as i128 - x2 as i128 * y1 as i128
            })
            .sum();
        s as i64
    }

    /// Edges as (start, end) in counterclockwise order. A segment yields a
    /// single edge, a point none.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        let n = self.vertices.len();
        match n {
            0 | 1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            _ => (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect(),
        }
    }

    /// Primitive direction and lattice length of each edge. For a segment the
    /// boundary loop goes out and back, giving two entries.
    pub fn primitive_edges(&self) -> Vec<(LatticePoint, i64)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        let loop_edges: Vec<(LatticePoint, LatticePoint)> = if n == 2 {
            vec![(self.vertices[0], self.vertices[1]), (self.vertices[1], self.vertices[0])]
        } else {
            self.edges()
        };
        loop_edges
            .into_iter()
            .map(|(p, q)| {
                let (dx, dy) = (q.0 - p.0, q.1 - p.1);
                let g = dx.gcd(&dy);
                ((dx / g, dy / g), g)
            })
            .collect()
    }

    /// Number of lattice points on the boundary, from edge gcds.
    pub fn boundary_count_by_gcd(&self) -> usize {
        match self.dimension() {
            0 => self.vertices.len(),
            1 => self.primitive_edges()[0].1 as usize + 1,
            _ => self.primitive_edges().iter().map(|e| e.1 as usize).sum(),
        }
    }

    pub fn to_rational(&self) -> RationalPolygon {
        RationalPolygon { vertices: self.vertices.iter().map(|&(a, b)| (rat(a), rat(b))).collect() }
    }

    pub fn lattice_points(&self) -> LatticeCount {
        self.to_rational().lattice_points()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.dimension() {
            0 => self.vertices.first() == Some(&p),
            1 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let c = (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
                c == 0 && within(a.0, b.0, p.0) && within(a.1, b.1, p.1)
            }
            _ => self.edges().iter().all(|&(a, b)| {
                (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128 >= 0
            }),
        }
    }

    pub fn dilate(&self, d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::Invalid(format!("dilation factor must be positive, got {d}")));
        }
        Ok(IntegralPolygon { vertices: self.vertices.iter().map(|&(a, b)| (a * d, b * d)).collect() })
    }

    pub fn translate(&self, t: LatticePoint) -> Self {
        IntegralPolygon { vertices: self.vertices.iter().map(|&(a, b)| (a + t.0, b + t.1)).collect() }
    }

    /// Builds a polygon from points that must all be vertices.
    pub fn from_vertices(vertices: &[LatticePoint]) -> Result<Self> {
        let p = convex_hull(vertices)?;
        if p.vertices.len() != {
            let mut v = vertices.to_vec();
            v.sort();
            v.dedup();
            v.len()
        } {
            return Err(Error::Invalid("vertex list is not in convex position".into()));
        }
        Ok(p)
    }
}

fn within(a: i64, b: i64, x: i64) -> bool {
    a.min(b) <= x && x <= a.max(b)
}

/// Maximum number of lattice points of `P` on a single affine line.
pub fn max_collinear(p: &IntegralPolygon) -> usize {
    max_collinear_points(&p.lattice_points().points)
}

pub fn max_collinear_points(pts: &[LatticePoint]) -> usize {
    if pts.len() <= 2 {
        return pts.len();
    }
    let mut best = 2;
    for (i, &p) in pts.iter().enumerate() {
        let mut dirs: HashMap<LatticePoint, usize> = HashMap::new();
        for &q in &pts[i + 1..] {
            let (dx, dy) = (q.0 - p.0, q.1 - p.1);
            let g = dx.gcd(&dy);
            let (mut dx, mut dy) = (dx / g, dy / g);
            if dx < 0 || (dx == 0 && dy < 0) {
                dx = -dx;
                dy = -dy;
            }
            let c = dirs.entry((dx, dy)).or_insert(1);
            *c += 1;
            best = best.max(*c);
        }
    }
    best
}

/// Convex polygon with exact rational vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
}

impl RationalPolygon {
    pub fn hull(points: Vec<RationalPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(RationalPolygon { vertices: hull_generic(points) })
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn dimension(&self) -> u8 {
        dimension_of(self.vertices.len())
    }

    pub fn require_2d(&self) -> Result<()> {
        match self.dimension() {
            2 => Ok(()),
            d => Err(Error::Degenerate(d)),
        }
    }

    pub fn area2(&self) -> BigRational {
        let n = self.vertices.len();
        if n < 3 {
            return BigRational::zero();
        }
        (0..n).fold(BigRational::zero(), |s, i| {
            let (x1, y1) = &self.vertices[i];
            let (x2, y2) = &self.vertices[(i + 1) % n];
            s + x1 * y2 - x2 * y1
        })
    }

    pub fn dilate(&self, d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::Invalid(format!("dilation factor must be positive, got {d}")));
        }
        let d = rat(d);
        Ok(RationalPolygon { vertices: self.vertices.iter().map(|(a, b)| (a * &d, b * &d)).collect() })
    }

    /// `Some` when every vertex is integral.
    pub fn to_integral(&self) -> Option<IntegralPolygon> {
        let vertices = self
            .vertices
            .iter()
            .map(|(a, b)| {
                if a.is_integer() && b.is_integer() {
                    Some((a.to_integer().to_i64()?, b.to_integer().to_i64()?))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntegralPolygon { vertices })
    }

    /// Edge inequalities `a x + b y >= c` with integer coefficients, one per
    /// counterclockwise edge.
    pub fn edge_inequalities(&self) -> Vec<(BigInt, BigInt, BigInt)> {
        let n = self.vertices.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let (x1, y1) = &self.vertices[i];
                let (x2, y2) = &self.vertices[(i + 1) % n];
                let dx = x2 - x1;
                let dy = y2 - y1;
                let a = -dy.clone();
                let b = dx.clone();
                let c = -(&dy * x1) + &dx * y1;
                let l = a.denom().lcm(b.denom()).lcm(c.denom());
                let lr = BigRational::from_integer(l);
                let scale = |q: BigRational| (q * &lr).to_integer();
                let (a, b, c) = (scale(a), scale(b), scale(c));
                let g = a.gcd(&b).gcd(&c);
                (a / &g, b / &g, c / &g)
            })
            .collect()
    }

    /// Exact enumeration by vertical column scan.
    pub fn lattice_points(&self) -> LatticeCount {
        match self.dimension() {
            0 => {
                let pts: Vec<LatticePoint> = self.to_integral().map(|p| p.vertices).unwrap_or_default();
                let n = pts.len();
                LatticeCount { points: pts, boundary: n, interior: 0 }
            }
            1 => {
                let pts = segment_points(&self.vertices[0], &self.vertices[1]);
                let n = pts.len();
                LatticeCount { points: pts, boundary: n, interior: 0 }
            }
            _ => self.scan(),
        }
    }

    fn scan(&self) -> LatticeCount {
        let ineqs = self.edge_inequalities();
        let xmin = self.vertices.iter().map(|v| v.0.ceil()).min().unwrap().to_integer();
        let xmax = self.vertices.iter().map(|v| v.0.floor()).max().unwrap().to_integer();
        let mut points = Vec::new();
        let (mut boundary, mut interior) = (0, 0);
        let mut x = xmin;
        while x <= xmax {
            let mut lo: Option<BigInt> = None;
            let mut hi: Option<BigInt> = None;
            let mut feasible = true;
            for (a, b, c) in &ineqs {
                let rhs = c - a * &x;
                if b.is_positive() {
                    let v = -((-rhs).div_floor(b));
                    if lo.as_ref().is_none_or(|l| v > *l) {
                        lo = Some(v);
                    }
                } else if b.is_negative() {
                    let v = rhs.div_floor(b);
                    if hi.as_ref().is_none_or(|h| v < *h) {
                        hi = Some(v);
                    }
                } else if rhs.is_positive() {
                    feasible = false;
                }
            }
            if let (true, Some(lo), Some(hi)) = (feasible, lo, hi) {
                let mut y = lo;
                while y <= hi {
                    let on_edge = ineqs.iter().any(|(a, b, c)| a * &x + b * &y == *c);
                    if on_edge {
                        boundary += 1;
                    } else {
                        interior += 1;
                    }
                    points.push((x.to_i64().expect("coordinate fits i64"), y.to_i64().expect("coordinate fits i64")));
                    y += 1;
                }
            }
            x += 1;
        }
        LatticeCount { points, boundary, interior }
    }

    /// Integral lattice points strictly inside.
    pub fn interior_points(&self) -> Vec<LatticePoint> {
        if self.dimension() < 2 {
            return Vec::new();
        }
        let ineqs = self.edge_inequalities();
        self.lattice_points()
            .points
            .into_iter()
            .filter(|&(x, y)| {
                let (x, y) = (BigInt::from(x), BigInt::from(y));
                ineqs.iter().all(|(a, b, c)| a * &x + b * &y > *c)
            })
            .collect()
    }

    /// True when the lattice point lies on the boundary.
    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        let (x, y) = (BigInt::from(p.0), BigInt::from(p.1));
        match self.dimension() {
            0 | 1 => self.lattice_points().points.contains(&p),
            _ => {
                let ineqs = self.edge_inequalities();
                ineqs.iter().all(|(a, b, c)| a * &x + b * &y >= *c) && ineqs.iter().any(|(a, b, c)| a * &x + b * &y == *c)
            }
        }
    }
}

fn segment_points(p: &RationalPoint, q: &RationalPoint) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    if p.0 == q.0 {
        if !p.0.is_integer() {
            return out;
        }
        let x = p.0.to_integer().to_i64().unwrap();
        let lo = p.1.clone().min(q.1.clone()).ceil().to_integer().to_i64().unwrap();
        let hi = p.1.clone().max(q.1.clone()).floor().to_integer().to_i64().unwrap();
        return (lo..=hi).map(|y| (x, y)).collect();
    }
    let lo = p.0.clone().min(q.0.clone()).ceil().to_integer().to_i64().unwrap();
    let hi = p.0.clone().max(q.0.clone()).floor().to_integer().to_i64().unwrap();
    let slope = (&q.1 - &p.1) / (&q.0 - &p.0);
    for x in lo..=hi {
        let y = &p.1 + &slope * (rat(x) - &p.0);
        if y.is_integer() {
            out.push((x, y.to_integer().to_i64().unwrap()));
        }
    }
    out
}

/// A polygon read from JSON: integral when every coordinate is an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonInput {
    Integral(IntegralPolygon),
    Rational(RationalPolygon),
}

#[derive(Deserialize)]
struct PolygonJson {
    vertices: Vec<[serde_json::Value; 2]>,
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rat(i)),
            None => Err(Error::Parse { pos: 0, msg: format!("coordinate {n} is not an integer") }),
        },
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse { pos: 0, msg: format!("bad coordinate {other}") }),
    }
}

/// Coordinates beyond this magnitude are rejected so that later products stay
/// comfortably inside machine integers.
pub const MAX_COORD: i64 = 1 << 40;

/// Parses `{"vertices": [[a, b], ...]}`; coordinates are integers or
/// `"num/den"` strings. The hull of the listed points is returned.
pub fn parse_polygon_json(text: &str) -> Result<PolygonInput> {
    let raw: PolygonJson = serde_json::from_str(text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
    let mut pts = Vec::with_capacity(raw.vertices.len());
    for [x, y] in &raw.vertices {
        let (x, y) = (json_rational(x)?, json_rational(y)?);
        for c in [&x, &y] {
            if c.abs() > rat(MAX_COORD) || c.denom() > &BigInt::from(MAX_COORD) {
                return Err(Error::Invalid("coordinate out of range".into()));
            }
        }
        pts.push((x, y));
    }
    let poly = RationalPolygon::hull(pts)?;
    Ok(match poly.to_integral() {
        Some(p) => PolygonInput::Integral(p),
        None => PolygonInput::Rational(poly),
    })
}

pub fn polygon_json(vertices: &[RationalPoint]) -> serde_json::Value {
    let vs: Vec<serde_json::Value> = vertices
        .iter()
        .map(|(a, b)| serde_json::json!([crate::exact_arith::rational_string(a), crate::exact_arith::rational_string(b)]))
        .collect();
    serde_json::json!({ "vertices": vs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PHI3P: [LatticePoint; 7] = [(0, 0), (1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (2, 3)];

    #[test]
    fn hull_examples() {
        let seg = convex_hull(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(seg.vertices(), &[(0, 0), (2, 2)]);
        assert_eq!(seg.dimension(), 1);
        let tet = convex_hull(&PHI3P).unwrap();
        assert_eq!(tet.vertices(), &[(0, 0), (3, 1), (2, 3), (1, 2)]);
        let pt = convex_hull(&[(0, 0)]).unwrap();
        assert_eq!(pt.dimension(), 0);
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn areas_and_counts() {
        let phi2 = convex_hull(&[(0, 0), (1, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(phi2.area2(), 3);
        let square = convex_hull(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(square.area2(), 2);
        let lc = square.lattice_points();
        assert_eq!((lc.boundary, lc.interior), (4, 0));
        assert_eq!(convex_hull(&PHI3P).unwrap().area2(), 8);
        let phi3 = convex_hull(&[(0, 0), (3, 1), (1, 3)]).unwrap();
        let lc = phi3.lattice_points();
        assert_eq!((lc.total(), lc.boundary, lc.interior), (7, 4, 3));
        assert_eq!(phi3.boundary_count_by_gcd(), 4);
    }

    #[test]
    fn dilation() {
        let t = convex_hull(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(t.dilate(2).unwrap().vertices(), &[(0, 0), (2, 0), (0, 2)]);
        assert_eq!(t.dilate(1).unwrap(), t);
        assert!(t.dilate(0).is_err());
    }

    #[test]
    fn collinear_examples() {
        let seg = convex_hull(&[(0, 0), (3, 0)]).unwrap();
        assert_eq!(max_collinear(&seg), 4);
        let phi2 = convex_hull(&[(0, 0), (2, 1), (1, 2)]).unwrap();
        assert_eq!(max_collinear(&phi2), 2);
        let phi3 = convex_hull(&[(0, 0), (3, 1), (1, 3)]).unwrap();
        assert_eq!(max_collinear(&phi3), 3);
    }

    #[test]
    fn rational_counts() {
        let tri = RationalPolygon::hull(vec![
            (rat(0), rat(0)),
            (BigRational::new(7.into(), 2.into()), rat(0)),
            (rat(0), BigRational::new(5.into(), 2.into())),
        ])
        .unwrap();
        // Brute force over the bounding box.
        let ineqs = tri.edge_inequalities();
        let mut n = 0;
        for x in -1..5 {
            for y in -1..4 {
                if ineqs.iter().all(|(a, b, c)| a * BigInt::from(x) + b * BigInt::from(y) >= *c) {
                    n += 1;
                }
            }
        }
        assert_eq!(tri.lattice_points().total(), n);
    }

    #[test]
    fn polygon_json_parsing() {
        let p = parse_polygon_json(r#"{"vertices": [[0,0],[3,1],[1,3]]}"#).unwrap();
        assert!(matches!(p, PolygonInput::Integral(_)));
        let q = parse_polygon_json(r#"{"vertices": [[0,0],["1/2",0],[0,1]]}"#).unwrap();
        assert!(matches!(q, PolygonInput::Rational(_)));
        assert!(parse_polygon_json(r#"{"vertices": []}"#).is_err());
        assert!(parse_polygon_json("[").is_err());
    }

    proptest! {
        #[test]
        fn pick_identity(pts in prop::collection::vec((-8i64..8, -8i64..8), 3..9)) {
            let p = convex_hull(&pts).unwrap();
            prop_assume!(p.dimension() == 2);
            let lc = p.lattice_points();
            prop_assert_eq!(p.area2(), lc.boundary as i64 + 2 * lc.interior as i64 - 2);
            prop_assert_eq!(lc.boundary, p.boundary_count_by_gcd());
            for q in &pts {
                prop_assert!(lc.points.contains(q));
            }
        }

        #[test]
        fn dilation_scales_area(pts in prop::collection::vec((-5i64..5, -5i64..5), 1..7), d in 1i64..6) {
            let p = convex_hull(&pts).unwrap();
            prop_assert_eq!(p.dilate(d).unwrap().area2(), d * d * p.area2());
            let r = p.to_rational().dilate(d).unwrap();
            prop_assert_eq!(r.area2(), rat(d * d * p.area2()));
        }
    }
}
