//! Graded pieces of symbolic powers as kernels of jet matrices over
//! lattice-point supports, plus Ehrhart counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact_arith::linalg::binomial_row;
use crate::exact_arith::modular::random_prime;
use crate::exact_arith::{integer_kernel, integer_nullity, rank_mod_p, Char, Scalar};
use crate::lattice_geom::{IntegralPolygon, LatticePoint, RationalPolygon};
use crate::laurent_poly::{jet_pairs, LaurentPoly};

/// Default seed for the random primes of the modular prefilter.
pub const PREFILTER_SEED: u64 = 0x5eed;

/// Column index set: distinct lattice points in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    points: Vec<LatticePoint>,
}

impl Support {
    pub fn new(mut points: Vec<LatticePoint>) -> Self {
        points.sort();
        points.dedup();
        Support { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn corner(&self) -> LatticePoint {
        let a = self.points.iter().map(|p| p.0).min().unwrap_or(0);
        let b = self.points.iter().map(|p| p.1).min().unwrap_or(0);
        (a, b)
    }
}

/// Rows indexed by `(i, j)` with `i + j < r` in jet order, columns by the
/// support; entry `binomial(α, i) * binomial(β, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMatrix {
    pub r: usize,
    pub ch: Char,
    pub rows: Vec<Vec<BigInt>>,
}

impl JetMatrix {
    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }
}

fn build_rows(points: &[LatticePoint], r: usize, shift: LatticePoint) -> Vec<Vec<BigInt>> {
    let cols: Vec<(Vec<BigInt>, Vec<BigInt>)> = points
        .iter()
        .map(|&(a, b)| (binomial_row(a - shift.0, r), binomial_row(b - shift.1, r)))
        .collect();
    jet_pairs(r).into_iter().map(|(i, j)| cols.iter().map(|(ba, bb)| &ba[i] * &bb[j]).collect()).collect()
}

pub fn jet_matrix(s: &Support, r: usize, ch: Char) -> JetMatrix {
    JetMatrix { r, ch, rows: build_rows(&s.points, r, (0, 0)) }
}

/// The same kernel with the support translated to its lower-left corner,
/// which keeps the binomial entries small. Multiplying by a monomial does not
/// change membership in `(v-1, w-1)^r`.
fn reduced_rows(s: &Support, r: usize) -> Vec<Vec<BigInt>> {
    build_rows(&s.points, r, s.corner())
}

/// Kernel basis of the jet matrix, each vector normalized to start with 1.
pub fn jet_kernel(s: &Support, r: usize, ch: Char) -> Result<Vec<Vec<Scalar>>> {
    if r == 0 {
        return Ok((0..s.len()).map(|k| (0..s.len()).map(|j| Scalar::from_i64((j == k) as i64, ch)).collect()).collect());
    }
    integer_kernel(&reduced_rows(s, r), s.len(), ch)
}

/// Kernel generators as Laurent polynomials supported in `s`.
pub fn kernel_polys(s: &Support, r: usize, ch: Char) -> Result<Vec<LaurentPoly>> {
    jet_kernel(s, r, ch)?
        .into_iter()
        .map(|v| LaurentPoly::from_terms(ch, s.points.iter().copied().zip(v)))
        .collect()
}

pub fn jet_nullity(s: &Support, r: usize, ch: Char) -> Result<usize> {
    if r == 0 {
        return Ok(s.len());
    }
    integer_nullity(&reduced_rows(s, r), s.len(), ch)
}

/// Two distinct 30-bit primes drawn from a seeded generator.
pub fn prefilter_primes(seed: u64) -> [u64; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_prime(&mut rng, 30);
    loop {
        let q = random_prime(&mut rng, 30);
        if q != p {
            return [p, q];
        }
    }
}

/// `None` when the modular ranks already prove the rational kernel is zero;
/// otherwise the smaller modular nullity, an upper bound.
pub fn modular_prefilter(s: &Support, r: usize, seed: u64) -> Option<usize> {
    let rows = reduced_rows(s, r);
    let bound = prefilter_primes(seed).iter().map(|&p| s.len() - rank_mod_p(&rows, s.len(), p)).min().unwrap();
    (bound > 0).then_some(bound)
}

/// `|dP ∩ Z^2| - rank`, the dimension of the degree-`d` piece of the `r`-th
/// symbolic power. In characteristic 0 a modular rank check runs first.
pub fn symbolic_dim(p: &RationalPolygon, d: i64, r: usize, ch: Char) -> Result<usize> {
    if d < 1 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    let s = Support::new(p.dilate(d)?.lattice_points().points);
    if r == 0 {
        return Ok(s.len());
    }
    if ch == 0 && modular_prefilter(&s, r, PREFILTER_SEED).is_none() {
        return Ok(0);
    }
    jet_nullity(&s, r, ch)
}

/// Removes the points of `s` on the line through `p` and `q`, after checking
/// that exactly `n` of them lie there.
pub fn lemma_eu_reduce(s: &Support, p: LatticePoint, q: LatticePoint, n: usize) -> Result<Support> {
    if p == q {
        return Err(Error::Invalid("a line needs two distinct points".into()));
    }
    let on = |x: &LatticePoint| (q.0 - p.0) * (x.1 - p.1) == (q.1 - p.1) * (x.0 - p.0);
    let count = s.points.iter().filter(|x| on(x)).count();
    if count != n {
        return Err(Error::Precondition(format!("line meets the support in {count} points, not {n}")));
    }
    Ok(Support::new(s.points.iter().copied().filter(|x| !on(x)).collect()))
}

/// `(area, B/2, 1)`: the coefficients of `L(n) = area n^2 + (B/2) n + 1`.
pub fn ehrhart_polynomial(p: &IntegralPolygon) -> Result<[BigRational; 3]> {
    p.require_2d()?;
    let b = p.lattice_points().boundary as i64;
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    Ok([q(p.area2(), 2), q(b, 2), q(1, 1)])
}

pub fn ehrhart_eval(c: &[BigRational; 3], n: i64) -> BigRational {
    let n = BigRational::from_integer(BigInt::from(n));
    &c[0] * &n * &n + &c[1] * &n + &c[2]
}

/// Numerator `f` of the Ehrhart series `sum L(n) s^n = f(s) / (1-s)^3`,
/// from direct counts of the dilates up to `n = truncation`.
pub fn hilbert_numerator(p: &IntegralPolygon, truncation: usize) -> Result<Vec<i64>> {
    p.require_2d()?;
    if truncation < 3 {
        return Err(Error::Invalid("truncation must be at least 3".into()));
    }
    let mut l = vec![1i64];
    for n in 1..=truncation as i64 {
        l.push(p.dilate(n)?.lattice_points().total() as i64);
    }
    let cube = [1i64, -3, 3, -1];
    let f: Vec<i64> =
        (0..=truncation).map(|k| (0..4).filter(|&i| i <= k).map(|i| cube[i] * l[k - i]).sum()).collect();
    if f[3..].iter().any(|&x| x != 0) {
        return Err(Error::Invalid("Ehrhart series numerator has a nonzero tail".into()));
    }
    let mut f = f[..3].to_vec();
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    Ok(f)
}

/// Coefficient vector of `f` on the support, in column order.
pub fn coefficient_vector(f: &LaurentPoly, s: &Support) -> Vec<Scalar> {
    s.points.iter().map(|&e| f.coeff(e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herzog_semigroup::{herzog_data, triangle};
    use crate::lattice_geom::convex_hull;
    use crate::laurent_poly::parse_text;
    use proptest::prelude::*;
    use rand::Rng;

    fn support_of(p: &IntegralPolygon) -> Support {
        Support::new(p.lattice_points().points)
    }

    #[test]
    fn small_examples() {
        let sq = Support::new(vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        let m = jet_matrix(&sq, 1, 0);
        assert_eq!(m.rows.len(), 1);
        assert!(m.rows[0].iter().all(|x| *x == BigInt::from(1)));
        assert_eq!(jet_nullity(&sq, 1, 0).unwrap(), 3);
        assert_eq!(jet_matrix(&sq, 4, 0).rows.len(), 10);

        let phi2 = parse_text("-v^2*w - v*w^2 + 3*v*w - 1", 0).unwrap();
        let s = support_of(&phi2.newton_polygon().unwrap());
        assert_eq!(s.len(), 4);
        let k = kernel_polys(&s, 2, 0).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].normalize_lead_minus_one(), phi2.normalize_lead_minus_one());

        let phi3p = parse_text("-1 + 5*v*w - 3*v^2*w + v^3*w - 2*v*w^2 - v^2*w^2 + v^2*w^3", 0).unwrap();
        let s = support_of(&phi3p.newton_polygon().unwrap());
        assert_eq!(s.len(), 7);
        assert_eq!(jet_nullity(&s, 3, 0).unwrap(), 1);
    }

    #[test]
    fn translation_does_not_change_kernel() {
        let s = Support::new(vec![(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]);
        let t = Support::new(s.points().iter().map(|&(a, b)| (a - 40, b + 7)).collect());
        let direct = crate::exact_arith::bareiss_nullspace(&jet_matrix(&t, 2, 0).rows, t.len());
        let k = jet_kernel(&t, 2, 0).unwrap();
        assert_eq!(direct.len(), k.len());
        for (a, b) in direct.iter().zip(&k) {
            let a = crate::exact_arith::linalg::normalize_first_one(a.iter().cloned().map(Scalar::Rational).collect());
            assert_eq!(&a, b);
        }
    }

    #[test]
    fn herzog_pieces() {
        let h = herzog_data(9, 10, 13).unwrap();
        let p = triangle(&h).unwrap();
        assert!(symbolic_dim(&p, 100, 3, 2).unwrap() >= 1);
        for d in 1..=102 {
            assert_eq!(symbolic_dim(&p, d, 3, 0).unwrap(), 0, "d = {d}");
        }
        for d in [5, 50, 100] {
            assert_eq!(symbolic_dim(&p, d, 0, 0).unwrap(), crate::herzog_semigroup::graded_dimension(&h, d).unwrap());
        }
    }

    #[test]
    fn lemma_eu_examples() {
        let s = Support::new(vec![(0, 0), (1, 0), (0, 1)]);
        let s2 = lemma_eu_reduce(&s, (0, 0), (1, 0), 2).unwrap();
        assert_eq!(s2.points(), &[(0, 1)]);
        assert_eq!(jet_nullity(&s, 2, 0).unwrap(), jet_nullity(&s2, 1, 0).unwrap());
        assert!(lemma_eu_reduce(&s, (0, 0), (1, 0), 3).is_err());

        let tet = convex_hull(&[(0, 0), (3, 1), (2, 3), (1, 2)]).unwrap();
        let s = support_of(&tet);
        let s2 = lemma_eu_reduce(&s, (0, 0), (3, 1), 2).unwrap();
        assert_eq!(jet_nullity(&s, 2, 0).unwrap(), jet_nullity(&s2, 1, 0).unwrap());
        let ggk3 = convex_hull(&[(-1, -1), (2, 0), (1, 2), (0, 1)]).unwrap();
        let s = support_of(&ggk3);
        assert_eq!(s.len(), 7);
        let s2 = lemma_eu_reduce(&s, (-1, -1), (2, 0), 2).unwrap();
        assert_eq!(jet_nullity(&s, 2, 0).unwrap(), jet_nullity(&s2, 1, 0).unwrap());
    }

    #[test]
    fn lemma_eu_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 40 {
            let mut pts: Vec<LatticePoint> = vec![(0, 0), (1, 1), (2, 2)];
            while pts.len() < 8 {
                let p = (rng.gen_range(-3..5), rng.gen_range(-3..5));
                if p.0 != p.1 && !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let s = Support::new(pts);
            let s2 = lemma_eu_reduce(&s, (0, 0), (1, 1), 3).unwrap();
            assert_eq!(jet_nullity(&s, 3, 0).unwrap(), jet_nullity(&s2, 2, 0).unwrap());
            done += 1;
        }
    }

    #[test]
    fn ehrhart_examples() {
        let sq = convex_hull(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let c = ehrhart_polynomial(&sq).unwrap();
        assert_eq!(c, [BigRational::from_integer(1.into()), BigRational::from_integer(2.into()), BigRational::from_integer(1.into())]);
        assert_eq!(hilbert_numerator(&sq, 6).unwrap().iter().sum::<i64>(), 2);
        let phi2 = convex_hull(&[(0, 0), (2, 1), (1, 2)]).unwrap();
        assert_eq!(hilbert_numerator(&phi2, 6).unwrap().iter().sum::<i64>(), 3);
        let phi3 = convex_hull(&[(0, 0), (3, 1), (1, 3)]).unwrap();
        let c = ehrhart_polynomial(&phi3).unwrap();
        assert_eq!(c[0], BigRational::from_integer(4.into()));
        assert_eq!(c[1], BigRational::from_integer(2.into()));
        assert_eq!(hilbert_numerator(&phi3, 19).unwrap().iter().sum::<i64>(), 8);
        let tet = convex_hull(&[(0, 0), (3, 1), (2, 3), (1, 2)]).unwrap();
        assert_eq!(ehrhart_eval(&ehrhart_polynomial(&tet).unwrap(), 1), BigRational::from_integer(7.into()));
        assert!(hilbert_numerator(&tet, 2).is_err());
    }

    proptest! {
        #[test]
        fn kernel_round_trip(pts in prop::collection::vec((-3i64..4, -3i64..4), 1..12), r in 1usize..4, ch in prop::sample::select(vec![0u64, 2, 3, 7])) {
            let s = Support::new(pts);
            let ker = kernel_polys(&s, r, ch).unwrap();
            prop_assert!(jet_nullity(&s, r, ch).unwrap() >= s.len().saturating_sub(r * (r + 1) / 2));
            prop_assert_eq!(ker.len(), jet_nullity(&s, r, ch).unwrap());
            for f in &ker {
                prop_assert!(f.jet(r).is_zero());
                prop_assert!(f.support().iter().all(|e| s.points().contains(e)));
            }
            let rows = jet_matrix(&s, r, ch).rows;
            for f in &ker {
                let v = coefficient_vector(f, &s);
                for row in &rows {
                    let dot = row.iter().zip(&v).fold(Scalar::zero(ch), |acc, (a, x)| &acc + &(&Scalar::from_bigint(a, ch) * x));
                    prop_assert!(dot.is_zero());
                }
            }
        }

        #[test]
        fn dimension_monotone_in_r(pts in prop::collection::vec((-3i64..4, -3i64..4), 1..12)) {
            let s = Support::new(pts);
            let dims: Vec<usize> = (0..5).map(|r| jet_nullity(&s, r, 0).unwrap()).collect();
            prop_assert!(dims.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn ehrhart_matches_counts(pts in prop::collection::vec((-4i64..4, -4i64..4), 3..8)) {
            let p = convex_hull(&pts).unwrap();
            prop_assume!(p.dimension() == 2);
            let c = ehrhart_polynomial(&p).unwrap();
            for n in 1..=5 {
                let count = p.dilate(n).unwrap().lattice_points().total() as i64;
                prop_assert_eq!(ehrhart_eval(&c, n), BigRational::from_integer(count.into()));
            }
            let f = hilbert_numerator(&p, 8).unwrap();
            prop_assert!(f.iter().all(|&x| x >= 0));
            prop_assert_eq!(f.iter().sum::<i64>(), p.area2());
        }
    }
}
