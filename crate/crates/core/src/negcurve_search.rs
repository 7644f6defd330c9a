//! Search for negative curves in the graded pieces of the symbolic powers of
//! the space monomial prime `p_{a,b,c}`, with the four-condition check that
//! turns a kernel element into a negative curve.

use num_bigint::BigInt;
use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{check_char, Char};
use crate::herzog_semigroup::{herzog_data, triangle, HerzogData};
use crate::irreducibility::certify;
use crate::lattice_geom::{convex_hull, LatticePoint, RationalPolygon};
use crate::laurent_poly::LaurentPoly;
use crate::nct_catalog::{is_nct, NctReport};
use crate::symbolic_power::{jet_nullity, kernel_polys, modular_prefilter, Support, PREFILTER_SEED};

/// Cells whose support exceeds this many lattice points are skipped by
/// [`scan`] unless long runs are enabled.
pub const LONG_RUN_POINTS: usize = 120;

/// `d^2 < a b c r^2`, i.e. `d / r < sqrt(abc)`.
pub fn is_negative_pair(a: i64, b: i64, c: i64, r: i64, d: i64) -> bool {
    let lhs = BigInt::from(d) * d;
    let rhs = BigInt::from(a) * b * c * r * r;
    lhs < rhs
}

/// Largest `d` with `d^2 < abc r^2`.
pub fn max_degree(a: i64, b: i64, c: i64, r: i64) -> i64 {
    let n = (a as i128) * (b as i128) * (c as i128) * (r as i128) * (r as i128);
    let s = n.sqrt();
    (if s * s == n { s - 1 } else { s }) as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeCurveChecks {
    pub irreducible: bool,
    pub edge_touching: bool,
    pub jet_membership: bool,
    pub area_inequality: bool,
}

impl NegativeCurveChecks {
    pub fn all(&self) -> bool {
        self.irreducible && self.edge_touching && self.jet_membership && self.area_inequality
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeCurveReport {
    pub abc: (i64, i64, i64),
    pub char: Char,
    pub r: usize,
    pub d: i64,
    pub phi: LaurentPoly,
    pub newton_vertices: Vec<LatticePoint>,
    pub support_size: usize,
    pub symbolic_dim: usize,
    pub checks: NegativeCurveChecks,
    pub certificate: String,
    pub nct: NctReport,
    /// Interior lattice points of the hull of `dP ∩ Z^2` minus `r(r-1)/2`.
    pub genus: i64,
    pub interior_of_hull: usize,
    /// Lattice points strictly inside the rational polygon `dP`; can exceed
    /// the hull count by points on the hull boundary.
    pub interior_of_dp: usize,
}

fn dilated(h: &HerzogData, d: i64) -> Result<RationalPolygon> {
    triangle(h)?.dilate(d)
}

/// Whether every edge of `poly` carries a term of `phi`.
pub fn touches_every_edge(poly: &RationalPolygon, phi: &LaurentPoly) -> bool {
    poly.edge_inequalities().iter().all(|(a, b, c)| {
        phi.terms().keys().any(|&(x, y)| a * BigInt::from(x) + b * BigInt::from(y) == *c)
    })
}

fn hull_interior(poly: &RationalPolygon) -> Result<usize> {
    Ok(convex_hull(&poly.lattice_points().points)?.lattice_points().interior)
}

fn genus_from(interior: usize, r: usize) -> Result<i64> {
    let g = interior as i64 - (r * (r.max(1) - 1) / 2) as i64;
    if g < 0 {
        return Err(Error::Contradiction(format!("interior count {interior} is below r(r-1)/2")));
    }
    Ok(g)
}

/// `I - r(r-1)/2`, with `I` the interior lattice count of the hull of
/// `dP ∩ Z^2`.
pub fn genus_payload(a: i64, b: i64, c: i64, r: usize, d: i64) -> Result<i64> {
    let h = herzog_data(a, b, c)?;
    genus_from(hull_interior(&dilated(&h, d)?)?, r)
}

/// Kernel of the jet conditions on `dP ∩ Z^2`; in characteristic 0 the
/// modular ranks run first.
fn cell_kernel(support: &Support, r: usize, ch: Char, seed: u64) -> Result<Vec<LaurentPoly>> {
    if ch == 0 && modular_prefilter(support, r, seed).is_none() {
        return Ok(Vec::new());
    }
    if jet_nullity(support, r, ch)? == 0 {
        return Ok(Vec::new());
    }
    kernel_polys(support, r, ch)
}

fn examine(
    h: &HerzogData,
    abc: (i64, i64, i64),
    ch: Char,
    r: usize,
    d: i64,
    seed: u64,
) -> Result<Option<NegativeCurveReport>> {
    let poly = dilated(h, d)?;
    let counts = poly.lattice_points();
    let support = Support::new(counts.points);
    let kernel = cell_kernel(&support, r, ch, seed)?;
    // A negative curve spans its graded piece: any other element meets it
    // negatively and so contains it. Larger kernels hold none.
    if kernel.len() != 1 {
        return Ok(None);
    }
    let phi = kernel.into_iter().next().unwrap().normalize_lead_minus_one();
    let cert = certify(&phi)?;
    let checks = NegativeCurveChecks {
        irreducible: cert.is_irreducible() == Some(true),
        edge_touching: touches_every_edge(&poly, &phi),
        jet_membership: phi.multiplicity_at_one()? >= r,
        area_inequality: is_negative_pair(abc.0, abc.1, abc.2, r as i64, d),
    };
    if !checks.all() {
        return Ok(None);
    }
    let interior_of_hull = hull_interior(&poly)?;
    let genus = genus_from(interior_of_hull, r)?;
    Ok(Some(NegativeCurveReport {
        abc,
        char: ch,
        r,
        d,
        newton_vertices: phi.newton_polygon()?.vertices().to_vec(),
        support_size: support.len(),
        symbolic_dim: 1,
        certificate: cert.label().to_string(),
        nct: is_nct(&phi, r)?,
        phi,
        checks,
        genus,
        interior_of_hull,
        interior_of_dp: poly.interior_points().len(),
    }))
}

/// The negative curve in degree `d` of the `r`-th symbolic power, if any.
pub fn find(a: i64, b: i64, c: i64, ch: Char, r: usize, d: i64) -> Result<Option<NegativeCurveReport>> {
    check_char(ch)?;
    if r == 0 || d < 1 {
        return Err(Error::Invalid("r and d must be positive".into()));
    }
    if !is_negative_pair(a, b, c, r as i64, d) {
        return Err(Error::Precondition(format!("d = {d} is not below r sqrt(abc) for r = {r}")));
    }
    let h = herzog_data(a, b, c)?;
    examine(&h, (a, b, c), ch, r, d, PREFILTER_SEED)
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Only these degrees, when given.
    pub degrees: Option<Vec<i64>>,
    /// Also examine cells above [`LONG_RUN_POINTS`].
    pub long: bool,
    /// Seed for the modular prefilter primes.
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { degrees: None, long: false, seed: PREFILTER_SEED }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOutcome {
    pub hits: Vec<NegativeCurveReport>,
    pub cells: usize,
    /// `(r, d, support size)` of the cells left out for size.
    pub skipped: Vec<(usize, i64, usize)>,
}

/// Every cell `(r, d)` with `1 <= r <= r_max` and `d^2 < abc r^2`, examined
/// in parallel; hits sorted by `(r, d)`. `progress` sees each finished cell.
pub fn scan_with_progress(
    a: i64,
    b: i64,
    c: i64,
    ch: Char,
    r_max: usize,
    opts: &ScanOptions,
    progress: &(dyn Fn(usize, i64) + Sync),
) -> Result<ScanOutcome> {
    check_char(ch)?;
    if r_max == 0 {
        return Err(Error::Invalid("r_max must be positive".into()));
    }
    let h = herzog_data(a, b, c)?;
    let cells: Vec<(usize, i64)> = (1..=r_max)
        .flat_map(|r| (1..=max_degree(a, b, c, r as i64)).map(move |d| (r, d)))
        .filter(|(_, d)| opts.degrees.as_ref().is_none_or(|ds| ds.contains(d)))
        .collect();
    let tri = triangle(&h)?;
    let results: Vec<Result<(Option<NegativeCurveReport>, Option<usize>)>> = cells
        .par_iter()
        .map(|&(r, d)| {
            let size = tri.dilate(d)?.lattice_points().total();
            let out = if size > LONG_RUN_POINTS && !opts.long {
                (None, Some(size))
            } else {
                (examine(&h, (a, b, c), ch, r, d, opts.seed)?, None)
            };
            progress(r, d);
            Ok(out)
        })
        .collect();
    let mut outcome = ScanOutcome { hits: Vec::new(), cells: cells.len(), skipped: Vec::new() };
    for (&(r, d), res) in cells.iter().zip(results) {
        let (hit, skipped) = res?;
        outcome.hits.extend(hit);
        if let Some(size) = skipped {
            outcome.skipped.push((r, d, size));
        }
    }
    Ok(outcome)
}

pub fn scan(a: i64, b: i64, c: i64, ch: Char, r_max: usize, opts: &ScanOptions) -> Result<ScanOutcome> {
    scan_with_progress(a, b, c, ch, r_max, opts, &|_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent_poly::parse_text;
    use crate::nct_catalog::canonical_form;

    const PHI3P: &str = "-1 + 5*v*w - 3*v^2*w + v^3*w - 2*v*w^2 - v^2*w^2 + v^2*w^3";

    #[test]
    fn negative_pairs() {
        assert!(is_negative_pair(9, 10, 13, 3, 100));
        assert!(is_negative_pair(9, 10, 13, 3, 102));
        assert!(!is_negative_pair(9, 10, 13, 3, 103));
        assert!(is_negative_pair(9, 10, 13, 3, 0));
        assert_eq!(max_degree(9, 10, 13, 3), 102);
        // abc r^2 a perfect square: equality is not negative.
        assert_eq!(max_degree(1, 1, 4, 1), 1);
        assert!(!is_negative_pair(1, 1, 4, 1, 2));
    }

    #[test]
    fn char_two_curve_of_nine_ten_thirteen() {
        let rep = find(9, 10, 13, 2, 3, 100).unwrap().expect("negative curve");
        assert!(rep.checks.all());
        assert!(rep.nct.accepted());
        let target = canonical_form(&parse_text(PHI3P, 2).unwrap(), 3).unwrap();
        assert_eq!(canonical_form(&rep.phi, 3).unwrap(), target);
        assert_eq!(rep.genus, 0);
        assert_eq!(genus_payload(9, 10, 13, 3, 100).unwrap(), 0);
        assert_eq!(rep.interior_of_hull, 3);
        assert!(find(9, 10, 13, 2, 3, 103).is_err());
    }

    #[test]
    fn nothing_at_r3_in_char_zero() {
        for d in 1..=102 {
            assert!(find(9, 10, 13, 0, 3, d).unwrap().is_none(), "d = {d}");
        }
    }

    #[test]
    fn scans_are_sorted_and_complete() {
        let out = scan(9, 10, 13, 2, 3, &ScanOptions::default()).unwrap();
        assert!(out.hits.iter().any(|h| (h.r, h.d) == (3, 100)));
        let keys: Vec<(usize, i64)> = out.hits.iter().map(|h| (h.r, h.d)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for h in &out.hits {
            assert!(h.nct.accepted(), "{:?}", (h.r, h.d));
        }
        let zero = scan(9, 10, 13, 0, 3, &ScanOptions::default()).unwrap();
        assert!(zero.hits.iter().all(|h| h.r < 3));
        let small = scan(3, 7, 8, 0, 2, &ScanOptions::default()).unwrap();
        assert!(!small.hits.is_empty());
        for h in &small.hits {
            assert!(h.nct.accepted());
            assert_eq!(h.genus, 0);
        }
    }

    #[test]
    fn filtered_scan() {
        let opts = ScanOptions { degrees: Some(vec![100]), ..Default::default() };
        let out = scan(9, 10, 13, 2, 3, &opts).unwrap();
        // d = 100 is only a negative degree for r = 3.
        assert_eq!(out.cells, 1);
        assert_eq!(out.hits.iter().map(|h| (h.r, h.d)).collect::<Vec<_>>(), vec![(3, 100)]);
    }

    #[test]
    fn eight_fifteen_fortythree() {
        let rep = find(8, 15, 43, 0, 9, 645).unwrap().expect("negative curve");
        assert_eq!(rep.newton_vertices.len(), 5);
        assert_eq!((rep.nct.boundary, rep.nct.interior, rep.nct.lattice_count), (9, 36, 45));
        assert!(rep.nct.accepted());
        assert_eq!((rep.genus, rep.interior_of_hull, rep.interior_of_dp), (0, 36, 37));
        assert_eq!(genus_payload(8, 15, 43, 9, 645).unwrap(), 0);
    }

    #[test]
    fn edge_touching() {
        let h = herzog_data(9, 10, 13).unwrap();
        let poly = dilated(&h, 100).unwrap();
        let pts = poly.lattice_points().points;
        let one = LaurentPoly::from_i64_terms(2, &[(pts[0], 1)]);
        assert!(!touches_every_edge(&poly, &one));
    }
}
