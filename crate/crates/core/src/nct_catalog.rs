//! Recognition, construction and classification of r-ncts: irreducible
//! Laurent polynomials of multiplicity `r` at `(1,1)` whose Newton polygon has
//! twice-area below `r^2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{Char, Scalar};
use crate::irreducibility::{certify, IrreducibilityCertificate, Verdict};
use crate::lattice_geom::{
    convex_hull, in_omega, max_collinear_points, normalizing_map, IntegralPolygon, LatticePoint, UnimodularAffineMap,
};
use crate::laurent_poly::LaurentPoly;
use crate::symbolic_power::{jet_nullity, kernel_polys, Support};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NctStatus {
    Accepted,
    /// Every check passed but irreducibility is not certified.
    ConditionallyAccepted,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NctReport {
    pub r: usize,
    pub char: Char,
    pub area2: i64,
    pub boundary: usize,
    pub interior: usize,
    pub lattice_count: usize,
    pub multiplicity: usize,
    pub certificate: Option<IrreducibilityCertificate>,
    pub checks: Vec<Check>,
    pub status: NctStatus,
}

impl NctReport {
    pub fn accepted(&self) -> bool {
        self.status == NctStatus::Accepted
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

/// Largest lattice count a polygon of an r-nct can have.
pub fn max_lattice_count(r: usize) -> usize {
    r * (r + 1) / 2 + 1
}

pub fn is_nct(phi: &LaurentPoly, r: usize) -> Result<NctReport> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let ch = phi.char();
    let poly = phi.newton_polygon()?;
    let counts = poly.lattice_points();
    let multiplicity = phi.multiplicity_at_one()?;
    let certificate = match certify(phi) {
        Ok(c) => Some(c),
        Err(Error::UnitPolynomial) => None,
        Err(e) => return Err(e),
    };
    let r2 = (r * r) as i64;
    let irreducible = certificate.as_ref().is_some_and(|c| !matches!(c.verdict, Verdict::Factored(_)));
    let mut checks = vec![
        Check { name: "multiplicity", passed: multiplicity == r },
        Check { name: "irreducible", passed: irreducible },
        Check { name: "area", passed: poly.area2() < r2 },
        Check { name: "lattice_count", passed: counts.total() <= max_lattice_count(r) },
    ];
    if r >= 2 {
        checks.push(Check { name: "collinear", passed: max_collinear_points(&counts.points) <= r });
    }
    // The count bound keeps the kernel computation small; skip it otherwise.
    let kernel_ok = checks.iter().all(|c| c.passed) && jet_nullity(&Support::new(counts.points.clone()), r, ch)? == 1;
    checks.push(Check { name: "kernel_dimension", passed: kernel_ok });
    let status = if !checks.iter().all(|c| c.passed) {
        NctStatus::Rejected
    } else if certificate.as_ref().is_some_and(|c| c.verdict == Verdict::Inconclusive) {
        NctStatus::ConditionallyAccepted
    } else {
        NctStatus::Accepted
    };
    Ok(NctReport {
        r,
        char: ch,
        area2: poly.area2(),
        boundary: counts.boundary,
        interior: counts.interior,
        lattice_count: counts.total(),
        multiplicity,
        certificate,
        checks,
        status,
    })
}

/// `phi_1 = vw - 1`, `phi_r = -phi_{r-1} (v - 1) + (-1)^{r-1} v (w - 1)^r`.
pub fn phi_family(r: usize, ch: Char) -> Result<LaurentPoly> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let one = Scalar::one(ch);
    let v_minus_1 = LaurentPoly::from_i64_terms(ch, &[((1, 0), 1), ((0, 0), -1)]);
    let w_minus_1 = LaurentPoly::from_i64_terms(ch, &[((0, 1), 1), ((0, 0), -1)]);
    let mut phi = LaurentPoly::from_i64_terms(ch, &[((1, 1), 1), ((0, 0), -1)]);
    for k in 2..=r {
        let sign = if k % 2 == 0 { -&one } else { one.clone() };
        let tail = w_minus_1.pow(k as u32).unit_multiply(&sign, (1, 0))?;
        phi = phi.multiply(&v_minus_1)?.neg().add(&tail)?;
    }
    Ok(phi)
}

/// The tetragon of the second family, with vertex `(-1,-1)`.
pub fn ggk_tetragon(r: i64) -> Result<IntegralPolygon> {
    if r < 3 {
        return Err(Error::Invalid(format!("the tetragon family starts at r = 3, got {r}")));
    }
    let vs = if r % 2 == 1 {
        [(-1, -1), (r - 1, 0), ((r - 1) / 2, r - 1), ((r - 3) / 2, r - 2)]
    } else {
        [(-1, -1), (r - 1, 0), (r / 2, r - 2), ((r - 2) / 2, r - 1)]
    };
    IntegralPolygon::from_vertices(&vs)
}

/// The generator of the one-dimensional space of polynomials supported on
/// the tetragon and vanishing to order `r` at `(1,1)`, scaled so the
/// coefficient of `v^-1 w^-1` is `-1`.
pub fn ggk_prime_family(r: i64, ch: Char) -> Result<LaurentPoly> {
    let p = ggk_tetragon(r)?;
    let support = Support::new(p.lattice_points().points);
    let mut kernel = kernel_polys(&support, r as usize, ch)?;
    if kernel.len() != 1 {
        return Err(Error::KernelDimension { expected: 1, found: kernel.len() });
    }
    let phi = kernel.pop().unwrap().normalize_lead_minus_one();
    for &v in p.vertices() {
        if phi.coeff(v).is_zero() {
            return Err(Error::Precondition(format!("vertex {v:?} has zero coefficient")));
        }
    }
    Ok(phi)
}

fn compare_terms(f: &LaurentPoly, g: &LaurentPoly) -> Ordering {
    let ka: Vec<&LatticePoint> = f.terms().keys().collect();
    let kb: Vec<&LatticePoint> = g.terms().keys().collect();
    ka.cmp(&kb).then_with(|| {
        f.terms()
            .values()
            .zip(g.terms().values())
            .map(|(a, b)| a.canonical_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Unimodular maps sending a primitive segment to `[0, L] x {0}`, one per
/// endpoint.
fn segment_maps(p: &IntegralPolygon) -> Vec<UnimodularAffineMap> {
    let vs = p.vertices();
    [(vs[0], vs[1]), (vs[1], vs[0])]
        .iter()
        .map(|&(a, b)| {
            // Any triangle on the segment reuses the polygon normalization.
            let apex = (a.0 + b.1 - a.1, a.1 - (b.0 - a.0));
            let tri = IntegralPolygon::from_vertices(&[a, b, apex]).expect("nondegenerate triangle");
            let i = tri.vertices().iter().position(|&v| v == a).unwrap();
            let m = normalizing_map(&tri, i, tri.vertices()[(i + 1) % 3] != b);
            debug_assert_eq!(m.apply(b).1, 0);
            m
        })
        .collect()
}

/// Least representative of the class of `phi` under unit multiplication and
/// unimodular exponent maps: over every normalization of the Newton polygon,
/// the lexicographically least (support, coefficients) with the coefficient
/// at the origin scaled to `-1`.
pub fn canonical_form(phi: &LaurentPoly, r: usize) -> Result<LaurentPoly> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = phi.newton_polygon()?;
    let maps: Vec<UnimodularAffineMap> = match p.dimension() {
        0 => return Err(Error::Degenerate(0)),
        1 if r >= 2 => return Err(Error::Degenerate(1)),
        1 => segment_maps(&p),
        _ => (0..p.vertices().len()).flat_map(|i| [false, true].map(|f| normalizing_map(&p, i, f))).collect(),
    };
    let best = maps
        .iter()
        .map(|m| phi.apply_affine(m).normalize_lead_minus_one())
        .min_by(compare_terms)
        .expect("at least one normalization");
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub phi: LaurentPoly,
    pub vertices: Vec<LatticePoint>,
    pub report: NctReport,
}

/// Saturated lattice point sets `S = conv(S) ∩ Z^2` inside the normalized
/// region for `r`, containing `(0,0)` and `(1,0)`, with at most the nct count
/// bound of points, at most `r` on a line, and twice-area below `r^2`. Every
/// r-nct polygon has a normalized copy among them.
pub fn candidate_supports(r: usize) -> Vec<Vec<LatticePoint>> {
    let ri = r as i64;
    let bound = max_lattice_count(r);
    let r2 = ri * ri;
    let region: Vec<LatticePoint> = (0..=r2)
        .flat_map(|y| (0..=3 * r2).map(move |x| (x, y)))
        .filter(|&p| in_omega(p, ri))
        .collect();
    let base = vec![(0, 0), (1, 0)];
    let mut seen: HashSet<Vec<LatticePoint>> = HashSet::from([base.clone()]);
    let mut frontier = vec![base];
    while !frontier.is_empty() {
        let next: Vec<Vec<LatticePoint>> = frontier
            .par_iter()
            .flat_map_iter(|s| {
                let hull = convex_hull(s).expect("nonempty");
                region
                    .iter()
                    .filter(|p| !s.contains(p))
                    .filter_map(|&p| {
                        let mut pts = hull.vertices().to_vec();
                        pts.push(p);
                        let h = convex_hull(&pts).expect("nonempty");
                        if h.area2() >= r2 {
                            return None;
                        }
                        let c = h.lattice_points().points;
                        (c.len() <= bound && max_collinear_points(&c) <= r).then_some(c)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        frontier = next.into_iter().filter(|c| seen.insert(c.clone())).collect();
    }
    let mut out: Vec<Vec<LatticePoint>> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Classes of r-ncts, one canonical representative each. `r = 3` is only
/// searched with `experimental` set.
pub fn classify(r: usize, ch: Char, experimental: bool) -> Result<Vec<CatalogEntry>> {
    match r {
        1 | 2 => {}
        3 if experimental => {}
        3 => return Err(Error::Invalid("classification for r = 3 is experimental".into())),
        _ => return Err(Error::Invalid(format!("classification is supported for r <= 3, got {r}"))),
    }
    crate::exact_arith::check_char(ch)?;
    let found: Vec<Option<LaurentPoly>> = candidate_supports(r)
        .par_iter()
        .map(|pts| -> Result<Option<LaurentPoly>> {
            let support = Support::new(pts.clone());
            if jet_nullity(&support, r, ch)? != 1 {
                return Ok(None);
            }
            let phi = kernel_polys(&support, r, ch)?.pop().unwrap();
            // Generators with a smaller polygon belong to another candidate.
            if phi.newton_polygon()? != convex_hull(pts)? {
                return Ok(None);
            }
            if !is_nct(&phi, r)?.accepted() {
                return Ok(None);
            }
            canonical_form(&phi, r).map(Some)
        })
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<String, LaurentPoly> = BTreeMap::new();
    for phi in found.into_iter().flatten() {
        classes.entry(phi.to_string()).or_insert(phi);
    }
    let mut reps: Vec<LaurentPoly> = classes.into_values().collect();
    reps.sort_by(compare_terms);
    reps.into_iter()
        .map(|phi| {
            let report = is_nct(&phi, r)?;
            let vertices = phi.newton_polygon()?.vertices().to_vec();
            Ok(CatalogEntry { phi, vertices, report })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent_poly::parse_text;
    use proptest::prelude::*;

    const PHI2: &str = "-v^2*w - v*w^2 + 3*v*w - 1";
    const PHI3: &str = "-1 + 6*v*w - 4*v^2*w + v^3*w - 4*v*w^2 + v^2*w^2 + v*w^3";
    const PHI3P: &str = "-1 + 5*v*w - 3*v^2*w + v^3*w - 2*v*w^2 - v^2*w^2 + v^2*w^3";

    fn lp(s: &str, ch: Char) -> LaurentPoly {
        parse_text(s, ch).unwrap()
    }

    #[test]
    fn recursion_matches_listed_members() {
        assert_eq!(phi_family(1, 0).unwrap(), lp("v*w - 1", 0));
        assert_eq!(phi_family(2, 0).unwrap(), lp(PHI2, 0));
        assert_eq!(phi_family(3, 0).unwrap(), lp(PHI3, 0));
        let phi4 = phi_family(4, 0).unwrap();
        assert_eq!(phi4.multiplicity_at_one().unwrap(), 4);
        assert!(phi4.newton_polygon().unwrap().area2() < 16);
        let rep = is_nct(&phi4, 4).unwrap();
        assert!(rep.checks.iter().filter(|c| c.name != "irreducible").all(|c| c.passed), "{rep:?}");
    }

    #[test]
    fn listed_ncts_are_accepted() {
        for (text, r, area2) in [("v*w - 1", 1, 0), (PHI2, 2, 3), (PHI3, 3, 8), (PHI3P, 3, 8)] {
            let rep = is_nct(&lp(text, 0), r).unwrap();
            assert!(rep.accepted(), "{text}: {rep:?}");
            assert_eq!(rep.area2, area2);
            assert_eq!(rep.area2, 2 * rep.interior as i64 + rep.boundary as i64 - 2);
        }
        let rep = is_nct(&lp(PHI3P, 2), 3).unwrap();
        assert!(rep.accepted());
        assert_eq!(rep.area2, 7);
        assert_eq!(lp(PHI3P, 2).newton_polygon().unwrap().vertices(), &[(0, 0), (3, 1), (2, 3)]);
    }

    #[test]
    fn rejections() {
        let rep = is_nct(&lp("(v - 1)^2", 0), 2).unwrap();
        assert_eq!(rep.status, NctStatus::Rejected);
        assert_eq!(rep.check("irreducible"), Some(false));
        let rep = is_nct(&lp(PHI2, 0), 3).unwrap();
        assert_eq!(rep.check("multiplicity"), Some(false));
        let rep = is_nct(&lp("(v - 1)*(w - 1)", 0), 2).unwrap();
        assert!(!rep.accepted());
        assert!(is_nct(&LaurentPoly::zero(0), 1).is_err());
    }

    #[test]
    fn tetragon_family() {
        let phi3 = ggk_prime_family(3, 0).unwrap();
        let target = lp(PHI3P, 0).unit_multiply(&Scalar::one(0), (-1, -1)).unwrap().normalize_lead_minus_one();
        assert_eq!(phi3, target);
        let p4 = ggk_tetragon(4).unwrap();
        assert_eq!(p4, IntegralPolygon::from_vertices(&[(-1, -1), (3, 0), (2, 2), (1, 3)]).unwrap());
        assert_eq!(p4.lattice_points().total(), 11);
        let c5 = ggk_tetragon(5).unwrap().lattice_points();
        assert_eq!((c5.boundary, c5.interior), (6, 10));
        for r in 3..=6 {
            let phi = ggk_prime_family(r, 0).unwrap();
            assert_eq!(phi.newton_polygon().unwrap(), ggk_tetragon(r).unwrap());
            assert_eq!(phi.multiplicity_at_one().unwrap(), r as usize);
        }
        assert!(ggk_tetragon(2).is_err());
    }

    #[test]
    fn canonical_forms() {
        let a = canonical_form(&lp("v*w - 1", 0), 1).unwrap();
        assert_eq!(a, canonical_form(&lp("v - 1", 0), 1).unwrap());
        assert_eq!(a, lp("v - 1", 0));
        assert_ne!(canonical_form(&lp(PHI3, 0), 3).unwrap(), canonical_form(&lp(PHI3P, 0), 3).unwrap());
        assert_eq!(canonical_form(&lp("v - 1", 0), 2), Err(Error::Degenerate(1)));
        let c = canonical_form(&lp(PHI2, 0), 2).unwrap();
        assert_eq!(canonical_form(&c, 2).unwrap(), c);
    }

    #[test]
    fn small_classifications() {
        let one = classify(1, 0, false).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].phi, lp("v - 1", 0));
        let two = classify(2, 0, false).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].phi, canonical_form(&lp(PHI2, 0), 2).unwrap());
        assert_eq!(classify(2, 3, false).unwrap().len(), 1);
        assert!(classify(3, 0, false).is_err());
        assert!(classify(4, 0, true).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn canonical_form_is_an_invariant(
            m in prop::sample::select(vec![[[1i64, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]], [[2, 1], [1, 1]], [[-1, 3], [0, 1]], [[1, 0], [-4, -1]]]),
            c in prop::sample::select(vec![-3i64, -1, 2, 5]),
            e in (-4i64..5, -4i64..5),
            which in 0usize..3,
        ) {
            let (text, r) = [(PHI2, 2), (PHI3, 3), (PHI3P, 3)][which];
            let phi = lp(text, 0);
            let moved = phi.apply_gl2z(m).unwrap().unit_multiply(&Scalar::from_i64(c, 0), e).unwrap();
            prop_assert_eq!(canonical_form(&moved, r).unwrap(), canonical_form(&phi, r).unwrap());
            let (a, b) = (is_nct(&phi, r).unwrap(), is_nct(&moved, r).unwrap());
            prop_assert_eq!((a.area2, a.boundary, a.interior, a.status), (b.area2, b.boundary, b.interior, b.status));
        }
    }
}
