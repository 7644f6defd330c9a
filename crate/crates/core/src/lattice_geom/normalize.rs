use num_integer::Integer;
use serde::Serialize;

use super::{convex_hull, IntegralPolygon, LatticePoint};
use crate::error::{Error, Result};

/// Lattice-preserving affine map `p -> p * M + t` on row vectors, the same
/// convention as the exponent action on Laurent polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnimodularAffineMap {
    pub matrix: [[i64; 2]; 2],
    pub translation: LatticePoint,
}

impl UnimodularAffineMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: LatticePoint) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(UnimodularAffineMap { matrix, translation })
    }

    pub fn identity() -> Self {
        UnimodularAffineMap { matrix: [[1, 0], [0, 1]], translation: (0, 0) }
    }

    pub fn det(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let m = self.matrix;
        (
            p.0 * m[0][0] + p.1 * m[1][0] + self.translation.0,
            p.0 * m[0][1] + p.1 * m[1][1] + self.translation.1,
        )
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let (a, b) = (self.matrix, other.matrix);
        let mut m = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        UnimodularAffineMap { matrix: m, translation: other.apply(self.translation) }
    }

    pub fn inverse(&self) -> Self {
        let m = self.matrix;
        let d = self.det();
        let inv = [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]];
        let lin = UnimodularAffineMap { matrix: inv, translation: (0, 0) };
        let t = lin.apply(self.translation);
        UnimodularAffineMap { matrix: inv, translation: (-t.0, -t.1) }
    }

    pub fn apply_polygon(&self, p: &IntegralPolygon) -> IntegralPolygon {
        let pts: Vec<LatticePoint> = p.vertices().iter().map(|&v| self.apply(v)).collect();
        convex_hull(&pts).expect("nonempty")
    }
}

/// Exact membership in the region bounded by `(0,0)`, `(sqrt2 r^2, 0)`,
/// `((sqrt2+1) r^2, r^2)`, `(0, r^2)`. The slanted side is `x - y <= sqrt2 r^2`,
/// tested by squaring when `x - y` is positive.
pub fn in_omega(p: LatticePoint, r: i64) -> bool {
    let (x, y) = (p.0 as i128, p.1 as i128);
    let r2 = (r as i128) * (r as i128);
    if x < 0 || y < 0 || y > r2 {
        return false;
    }
    let s = x - y;
    s <= 0 || s * s <= 2 * r2 * r2
}

/// Unimodular affine map sending vertex `i` of `p` to the origin, its
/// outgoing counterclockwise edge onto the positive x-axis (or its incoming
/// edge, reversed, when `reflect` is set), the polygon into the upper half
/// plane, and the other adjacent vertex `(a2, b2)` to `0 <= a2 < b2`.
pub fn normalizing_map(p: &IntegralPolygon, i: usize, reflect: bool) -> UnimodularAffineMap {
    let vs = p.vertices();
    let n = vs.len();
    let v0 = vs[i];
    let (next, prev) = (vs[(i + 1) % n], vs[(i + n - 1) % n]);
    let (along, other) = if reflect { (prev, next) } else { (next, prev) };
    let (dx, dy) = (along.0 - v0.0, along.1 - v0.1);
    let g = dx.gcd(&dy);
    let e = (dx / g, dy / g);
    // f with det(e, f) = 1, so rows (e, f) form a unimodular matrix E.
    let ext = e.0.extended_gcd(&e.1);
    let sgn = if ext.gcd < 0 { -1 } else { 1 };
    let f = (-ext.y * sgn, ext.x * sgn);
    debug_assert_eq!(e.0 * f.1 - e.1 * f.0, 1);
    // E^{-1} = [[f1, -e1], [-f0, e0]]; sends e to (1,0) and f to (0,1).
    let mut m = [[f.1, -e.1], [-f.0, e.0]];
    if reflect {
        // The polygon lies to the right of e; flip the second coordinate.
        m = [[m[0][0], -m[0][1]], [m[1][0], -m[1][1]]];
    }
    let lin = UnimodularAffineMap { matrix: m, translation: (0, 0) };
    let t = lin.apply(v0);
    let base = UnimodularAffineMap { matrix: m, translation: (-t.0, -t.1) };
    let (a2, b2) = base.apply(other);
    debug_assert!(b2 > 0);
    let k = Integer::div_floor(&a2, &b2);
    let shear = UnimodularAffineMap { matrix: [[1, 0], [-k, 1]], translation: (0, 0) };
    base.then(&shear)
}

/// Moves a two-dimensional polygon into the normalized position; the first
/// vertex and its outgoing edge are used. Any choice lands inside the bounded
/// region checked by [`in_omega`] when `area2 < r^2`.
pub fn normalize(p: &IntegralPolygon, r: i64) -> Result<(IntegralPolygon, UnimodularAffineMap)> {
    p.require_2d()?;
    if r < 1 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    if p.area2() as i128 >= (r as i128) * (r as i128) {
        return Err(Error::Precondition(format!("area2 = {} is not below r^2 = {}", p.area2(), r * r)));
    }
    let map = normalizing_map(p, 0, false);
    let q = map.apply_polygon(p);
    debug_assert!(q.vertices().iter().all(|&v| in_omega(v, r)));
    Ok((q, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_normalized(q: &IntegralPolygon, r: i64) {
        let vs = q.vertices();
        assert!(vs.contains(&(0, 0)));
        let i = vs.iter().position(|&v| v == (0, 0)).unwrap();
        let n = vs.len();
        let (next, prev) = (vs[(i + 1) % n], vs[(i + n - 1) % n]);
        assert!(next.1 == 0 && next.0 > 0);
        assert!(prev.1 > prev.0 && prev.0 >= 0);
        assert!(vs.iter().all(|&v| in_omega(v, r)));
    }

    #[test]
    fn normalize_examples() {
        let phi2 = convex_hull(&[(0, 0), (2, 1), (1, 2)]).unwrap();
        let (q, m) = normalize(&phi2, 2).unwrap();
        check_normalized(&q, 2);
        assert_eq!(m.apply_polygon(&phi2), q);
        let sq = convex_hull(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(normalize(&sq, 2).unwrap().0, sq);
        let seg = convex_hull(&[(0, 0), (2, 1)]).unwrap();
        assert_eq!(normalize(&seg, 2), Err(Error::Degenerate(1)));
    }

    #[test]
    fn omega_membership() {
        assert!(in_omega((0, 0), 2));
        assert!(in_omega((5, 0), 2)); // 25 <= 32
        assert!(!in_omega((6, 0), 2)); // 36 > 32
        assert!(in_omega((9, 4), 2));
        assert!(!in_omega((0, 5), 2));
    }

    proptest! {
        #[test]
        fn normalize_preserves_invariants(pts in prop::collection::vec((-6i64..6, -6i64..6), 3..8), which in 0usize..16) {
            let p = convex_hull(&pts).unwrap();
            prop_assume!(p.dimension() == 2);
            let mut r = 1;
            while r * r <= p.area2() { r += 1; }
            let (q, m) = normalize(&p, r).unwrap();
            check_normalized(&q, r);
            prop_assert_eq!(q.area2(), p.area2());
            let (lp, lq) = (p.lattice_points(), q.lattice_points());
            prop_assert_eq!((lp.boundary, lp.interior), (lq.boundary, lq.interior));
            prop_assert_eq!(super::super::max_collinear(&p), super::super::max_collinear(&q));
            prop_assert_eq!(m.inverse().apply_polygon(&q), p.clone());
            let n = p.vertices().len();
            let alt = normalizing_map(&p, which % n, which >= 8);
            check_normalized(&alt.apply_polygon(&p), r);
        }
    }
}
