//! Complete two-dimensional fans and the numerical invariants of their toric
//! surfaces.

pub mod thm36;

pub use thm36::{blowup_numbers, thm36_report, BlowupNumbers, Condition, ConditionStatus, Thm36Report};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{hermite_normal_form, serialize_rational, serialize_rationals, smith_normal_form};
use crate::lattice_geom::{halfplane_polygon, rat, IntegralPolygon, RationalPolygon};

pub type Ray = (i64, i64);

fn det(a: Ray, b: Ray) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Divides out the content of a nonzero vector, returning it alongside.
pub fn primitive(v: Ray) -> Result<(Ray, i64)> {
    if v == (0, 0) {
        return Err(Error::Invalid("zero ray".into()));
    }
    let g = v.0.gcd(&v.1);
    Ok(((v.0 / g, v.1 / g), g))
}

fn half(v: Ray) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: Ray, b: Ray) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b)))
}

/// Complete fan given by its primitive rays in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fan2D {
    rays: Vec<Ray>,
}

impl Fan2D {
    /// Makes the vectors primitive and sorts them counterclockwise, keeping
    /// the first one first. Fails unless every consecutive cone is strictly
    /// convex, which for three or more rays means the fan is complete.
    pub fn new(vectors: Vec<Ray>) -> Result<Self> {
        if vectors.len() < 3 {
            return Err(Error::Invalid(format!("a complete fan needs at least 3 rays, got {}", vectors.len())));
        }
        let first = primitive(vectors[0])?.0;
        let mut rays = vectors.into_iter().map(|v| primitive(v).map(|p| p.0)).collect::<Result<Vec<_>>>()?;
        rays.sort_by(|&a, &b| angle_cmp(a, b));
        rays.dedup();
        let start = rays.iter().position(|&r| r == first).unwrap();
        rays.rotate_left(start);
        let fan = Fan2D { rays };
        if fan.rays.len() < 3 || (0..fan.len()).any(|i| fan.det(i) <= 0) {
            return Err(Error::Invalid("rays do not form a complete fan".into()));
        }
        Ok(fan)
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    fn ray(&self, i: isize) -> Ray {
        let n = self.rays.len() as isize;
        self.rays[i.rem_euclid(n) as usize]
    }

    /// `det(a_i, a_{i+1})`.
    pub fn det(&self, i: usize) -> i64 {
        det(self.ray(i as isize), self.ray(i as isize + 1))
    }

    pub fn is_smooth(&self) -> bool {
        (0..self.len()).all(|i| self.det(i) == 1)
    }
}

/// Fan of primitive inward edge normals, in the polygon's edge order.
pub fn normal_fan(p: &IntegralPolygon) -> Result<Fan2D> {
    p.require_2d()?;
    let normals = p.edges().iter().map(|&(a, b)| (a.1 - b.1, b.0 - a.0)).collect();
    Fan2D::new(normals)
}

pub fn normal_fan_rational(p: &RationalPolygon) -> Result<Fan2D> {
    p.require_2d()?;
    let normals = p
        .edge_inequalities()
        .into_iter()
        .map(|(a, b, _)| match (a.to_i64(), b.to_i64()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Invalid("edge normal out of range".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Fan2D::new(normals)
}

/// `Cl = Z^free_rank ⊕ ⊕ Z/torsion_i`, with the images of the `n` torus
/// invariant divisors as columns of `grading_matrix` (free rows first, then
/// one row per torsion factor, reduced modulo it).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupPresentation {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub grading_matrix: Vec<Vec<i64>>,
}

impl ClassGroupPresentation {
    /// True when `g` (same row layout) is another grading of the same group
    /// with the same kernel, i.e. differs from ours by an automorphism.
    /// Checked by: `g` kills every relation and maps onto the group.
    pub fn presents_same(&self, rays: &[Vec<i64>], g: &[Vec<i64>]) -> bool {
        let f = self.free_rank;
        if g.len() != self.grading_matrix.len() {
            return false;
        }
        let reduce = |k: usize, x: i64| if k < f { x } else { x.rem_euclid(self.torsion[k - f]) };
        let dim = rays.first().map_or(0, |r| r.len());
        for c in 0..dim {
            for (k, row) in g.iter().enumerate() {
                let s: i64 = row.iter().zip(rays).map(|(x, r)| x * r[c]).sum();
                if reduce(k, s) != 0 {
                    return false;
                }
            }
        }
        // Surjectivity: the columns generate Z^f ⊕ T. Compare the index of
        // the column lattice, stacked with the torsion moduli, to 1.
        let n = g[0].len();
        let mut gens: Vec<Vec<BigInt>> = (0..n).map(|j| g.iter().map(|row| BigInt::from(row[j])).collect()).collect();
        for (t, &d) in self.torsion.iter().enumerate() {
            let mut v = vec![BigInt::zero(); g.len()];
            v[f + t] = BigInt::from(d);
            gens.push(v);
        }
        let h = hermite_normal_form(&gens);
        h.len() == g.len() && (0..g.len()).all(|i| h[i][i] == BigInt::from(1))
    }
}

/// Class group of the toric variety with the given rays in any dimension:
/// the cokernel of `Z^d -> Z^n`, `m -> (<m, a_i>)_i`.
pub fn class_group_of_rays(rays: &[Vec<i64>]) -> Result<ClassGroupPresentation> {
    let n = rays.len();
    let a: Vec<Vec<BigInt>> = rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let s = smith_normal_form(&a);
    let rank = s.diagonal.iter().filter(|d| !d.is_zero()).count();
    let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Invalid("class group entry out of range".into()));
    let free: Vec<Vec<BigInt>> = s.u[rank..].to_vec();
    let free = if free.is_empty() { free } else { hermite_normal_form(&free) };
    let mut grading = Vec::new();
    for row in &free {
        grading.push(row.iter().map(to_i64).collect::<Result<Vec<_>>>()?);
    }
    let mut torsion = Vec::new();
    for (i, d) in s.diagonal.iter().enumerate().take(rank) {
        if *d > BigInt::from(1) {
            torsion.push(to_i64(d)?);
            grading.push(s.u[i].iter().map(|x| to_i64(&x.mod_floor(d))).collect::<Result<Vec<_>>>()?);
        }
    }
    debug_assert!(grading.iter().all(|r| r.len() == n));
    Ok(ClassGroupPresentation { free_rank: n - rank, torsion, grading_matrix: grading })
}

/// Limits for [`parse_rays`].
pub const MAX_RAYS: usize = 64;
pub const MAX_RAY_DIM: usize = 8;
pub const MAX_RAY_ENTRY: i64 = 1 << 31;

#[derive(Deserialize)]
#[serde(untagged)]
enum RaysJson {
    Bare(Vec<Vec<i64>>),
    Wrapped { rays: Vec<Vec<i64>> },
}

/// Ray lists as JSON (`[[2,-1],[0,1]]` or `{"rays": [...]}`) or as
/// `2,-1;0,1`. Rays must be nonzero and of one common dimension.
pub fn parse_rays(text: &str) -> Result<Vec<Vec<i64>>> {
    let t = text.trim();
    let rays = if t.starts_with('[') || t.starts_with('{') {
        match serde_json::from_str::<RaysJson>(t).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })? {
            RaysJson::Bare(r) | RaysJson::Wrapped { rays: r } => r,
        }
    } else {
        let mut pos = 0;
        let mut rays = Vec::new();
        for row in t.split(';') {
            let mut ray = Vec::new();
            for x in row.split(',') {
                let v = x.trim().parse::<i64>().map_err(|e| Error::Parse { pos, msg: format!("{x:?}: {e}") })?;
                ray.push(v);
                pos += x.len() + 1;
            }
            rays.push(ray);
        }
        rays
    };
    if rays.is_empty() || rays.len() > MAX_RAYS {
        return Err(Error::Invalid(format!("between 1 and {MAX_RAYS} rays are required")));
    }
    let dim = rays[0].len();
    if dim == 0 || dim > MAX_RAY_DIM || rays.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid(format!("rays must share a dimension between 1 and {MAX_RAY_DIM}")));
    }
    if rays.iter().flatten().any(|x| x.abs() > MAX_RAY_ENTRY) {
        return Err(Error::Invalid("ray entry out of range".into()));
    }
    if rays.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return Err(Error::Invalid("zero ray".into()));
    }
    Ok(rays)
}

pub fn class_group(fan: &Fan2D) -> Result<ClassGroupPresentation> {
    let rays: Vec<Vec<i64>> = fan.rays().iter().map(|&(x, y)| vec![x, y]).collect();
    class_group_of_rays(&rays)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTable {
    /// `D_i^2`.
    #[serde(serialize_with = "serialize_rationals")]
    pub self_intersections: Vec<BigRational>,
    /// `D_i . D_{i+1}`.
    #[serde(serialize_with = "serialize_rationals")]
    pub adjacent: Vec<BigRational>,
    /// `K^2 = (sum D_i)^2`.
    #[serde(serialize_with = "serialize_rational")]
    pub k_squared: BigRational,
}

impl IntersectionTable {
    /// `D . D` for `D = sum c_i D_i`.
    pub fn square(&self, c: &[BigRational]) -> BigRational {
        let n = c.len();
        let mut s = BigRational::zero();
        for i in 0..n {
            s += &c[i] * &c[i] * &self.self_intersections[i];
            s += rat(2) * &c[i] * &c[(i + 1) % n] * &self.adjacent[i];
        }
        s
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn intersection_numbers(fan: &Fan2D) -> IntersectionTable {
    let n = fan.len() as isize;
    let adjacent: Vec<BigRational> = (0..n).map(|i| q(1, fan.det(i as usize))).collect();
    let self_intersections = (0..n)
        .map(|i| {
            let (p, c, x) = (fan.ray(i - 1), fan.ray(i), fan.ray(i + 1));
            q(-det(p, x), det(p, c) * det(c, x))
        })
        .collect();
    let mut t = IntersectionTable { self_intersections, adjacent, k_squared: BigRational::zero() };
    t.k_squared = t.square(&vec![rat(1); fan.len()]);
    t
}

/// `{x : <x, a_i> >= -1}`.
pub fn minus_k_polygon(fan: &Fan2D) -> Result<RationalPolygon> {
    let cons: Vec<_> = fan.rays().iter().map(|&a| (a, rat(-1))).collect();
    halfplane_polygon(&cons)
}

/// Coordinates of `b` in the basis `(a, c)`.
fn coords(a: Ray, c: Ray, b: Ray) -> (BigRational, BigRational) {
    let d = det(a, c);
    (q(det(b, c), d), q(det(a, b), d))
}

/// A lattice point of the triangle `0, a, c` other than its vertices, with
/// the least `det(a, b)`; exists whenever `det(a, c) > 1`.
fn interior_ray(a: Ray, c: Ray) -> Ray {
    let d = det(a, c);
    let (x0, x1) = (0.min(a.0).min(c.0), 0.max(a.0).max(c.0));
    let (y0, y1) = (0.min(a.1).min(c.1), 0.max(a.1).max(c.1));
    let mut best: Option<(i64, Ray)> = None;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let b = (x, y);
            let (u, w) = (det(b, c), det(a, b));
            if u > 0 && w > 0 && u + w <= d && best.is_none_or(|(k, _)| w < k) {
                best = Some((w, b));
            }
        }
    }
    best.expect("non-smooth cone has an interior lattice point").1
}

/// Inserts rays from the triangles `0, a_i, a_{i+1}` until every cone is
/// smooth. Each inserted `b = λ a_i + μ a_{i+1}` has `λ + μ <= 1`, so the
/// anticanonical polygon does not change.
pub fn smooth_refine(fan: &Fan2D) -> Fan2D {
    let mut rays = Vec::new();
    for i in 0..fan.len() {
        let (a, c) = (fan.ray(i as isize), fan.ray(i as isize + 1));
        let mut stack = vec![(a, c)];
        let mut cone_rays = vec![a];
        // Depth-first from the a-side keeps insertion order counterclockwise.
        while let Some((x, y)) = stack.pop() {
            if det(x, y) == 1 {
                if y != c {
                    cone_rays.push(y);
                }
                continue;
            }
            let b = interior_ray(x, y);
            stack.push((b, y));
            stack.push((x, b));
        }
        rays.extend(cone_rays);
    }
    let out = Fan2D { rays };
    debug_assert!(out.is_smooth());
    out
}

/// Coefficients of the pullback of `-K` along `smooth_refine`: a new ray
/// `λ a_i + μ a_{i+1}` gets `λ + μ`.
pub fn pullback_anticanonical(fan: &Fan2D, refined: &Fan2D) -> Vec<BigRational> {
    refined
        .rays()
        .iter()
        .map(|&b| {
            for i in 0..fan.len() {
                let (a, c) = (fan.ray(i as isize), fan.ray(i as isize + 1));
                let (l, m) = coords(a, c, b);
                if l >= BigRational::zero() && m >= BigRational::zero() {
                    return l + m;
                }
            }
            unreachable!("complete fan covers every ray")
        })
        .collect()
}

/// `(-K_X)^2` recomputed on the smooth refinement as the self-intersection
/// of the pulled-back anticanonical divisor.
pub fn k_squared_by_refinement(fan: &Fan2D) -> BigRational {
    let refined = smooth_refine(fan);
    intersection_numbers(&refined).square(&pullback_anticanonical(fan, &refined))
}
