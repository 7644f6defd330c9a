use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{RationalPoint, RationalPolygon};
use crate::error::{Error, Result};

fn dot(n: &(BigInt, BigInt), p: &RationalPoint) -> BigRational {
    &p.0 * BigRational::from_integer(n.0.clone()) + &p.1 * BigRational::from_integer(n.1.clone())
}

fn det(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// Solution set of `<n_i, x> >= c_i`. Returns the (possibly degenerate)
/// polygon, or an error when the region is empty or unbounded.
pub fn halfplane_polygon(constraints: &[((i64, i64), BigRational)]) -> Result<RationalPolygon> {
    let mut cons: Vec<((BigInt, BigInt), BigRational)> = Vec::new();
    for ((a, b), c) in constraints {
        if *a == 0 && *b == 0 {
            if c.is_positive() {
                return Err(Error::EmptyRegion);
            }
            continue;
        }
        cons.push(((BigInt::from(*a), BigInt::from(*b)), c.clone()));
    }
    if cons.is_empty() {
        return Err(Error::UnboundedRegion);
    }
    let spans = cons.iter().any(|(n, _)| !det(&cons[0].0, n).is_zero());
    if !spans {
        // All normals parallel to n0: each constraint bounds t = <n0, x>.
        let n0 = &cons[0].0;
        let scale = |n: &(BigInt, BigInt)| {
            if !n0.0.is_zero() {
                BigRational::new(n.0.clone(), n0.0.clone())
            } else {
                BigRational::new(n.1.clone(), n0.1.clone())
            }
        };
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for (n, c) in &cons {
            let l = scale(n);
            let bound = c / &l;
            if l.is_positive() {
                if lo.as_ref().is_none_or(|x| bound > *x) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|x| bound < *x) {
                hi = Some(bound);
            }
        }
        return match (lo, hi) {
            (Some(l), Some(h)) if l > h => Err(Error::EmptyRegion),
            _ => Err(Error::UnboundedRegion),
        };
    }

    let mut verts: Vec<RationalPoint> = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let ((n1, c1), (n2, c2)) = (&cons[i], &cons[j]);
            let d = det(n1, n2);
            if d.is_zero() {
                continue;
            }
            let d = BigRational::from_integer(d);
            let x = (c1 * BigRational::from_integer(n2.1.clone()) - c2 * BigRational::from_integer(n1.1.clone())) / &d;
            let y = (c2 * BigRational::from_integer(n1.0.clone()) - c1 * BigRational::from_integer(n2.0.clone())) / &d;
            let p = (x, y);
            if cons.iter().all(|(n, c)| dot(n, &p) >= *c) {
                verts.push(p);
            }
        }
    }
    if verts.is_empty() {
        return Err(Error::EmptyRegion);
    }
    // Nonempty; bounded iff the recession cone {x : <n_i, x> >= 0} is {0}.
    // A nonzero cone has an extreme ray orthogonal to some normal.
    for (n, _) in &cons {
        for s in [1i64, -1] {
            let dir = (
                BigRational::from_integer(-&n.1 * s),
                BigRational::from_integer(&n.0 * s),
            );
            if cons.iter().all(|(m, _)| !dot(m, &dir).is_negative()) {
                return Err(Error::UnboundedRegion);
            }
        }
    }
    RationalPolygon::hull(verts)
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    #[test]
    fn projective_plane_polygon() {
        let p = halfplane_polygon(&[((1, 0), rat(-1)), ((0, 1), rat(-1)), ((-1, -1), rat(-1))]).unwrap();
        assert_eq!(p.area2(), rat(9));
        assert_eq!(p.vertices(), &[(rat(-1), rat(-1)), (rat(2), rat(-1)), (rat(-1), rat(2))]);
    }

    #[test]
    fn degenerate_and_errors() {
        let seg = halfplane_polygon(&[((1, 0), rat(0)), ((-1, 0), rat(0)), ((0, 1), rat(0)), ((0, -1), rat(-1))]).unwrap();
        assert_eq!(seg.dimension(), 1);
        assert_eq!(halfplane_polygon(&[((1, 0), rat(0)), ((0, 1), rat(0))]), Err(Error::UnboundedRegion));
        assert_eq!(halfplane_polygon(&[((1, 0), rat(1)), ((-1, 0), rat(0))]), Err(Error::EmptyRegion));
        assert_eq!(
            halfplane_polygon(&[((1, 0), rat(0)), ((0, 1), rat(0)), ((-1, -1), rat(1))]),
            Err(Error::EmptyRegion)
        );
        assert_eq!(halfplane_polygon(&[]), Err(Error::UnboundedRegion));
    }
}
