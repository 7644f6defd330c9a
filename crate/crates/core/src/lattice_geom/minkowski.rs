use super::{convex_hull, IntegralPolygon, LatticePoint};

/// A lattice Minkowski decomposition `P = first + second`, placed so that the
/// sum is exactly `P` (not only up to translation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub first: IntegralPolygon,
    pub second: IntegralPolygon,
}

pub fn minkowski_sum(p: &IntegralPolygon, q: &IntegralPolygon) -> IntegralPolygon {
    let pts: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .flat_map(|a| q.vertices().iter().map(move |b| (a.0 + b.0, a.1 + b.1)))
        .collect();
    convex_hull(&pts).expect("nonempty summands")
}

fn walk(start: LatticePoint, edges: &[(LatticePoint, i64)]) -> IntegralPolygon {
    let mut pts = vec![start];
    let mut cur = start;
    for &((dx, dy), k) in edges {
        cur = (cur.0 + dx * k, cur.1 + dy * k);
        pts.push(cur);
    }
    convex_hull(&pts).expect("nonempty")
}

/// All decompositions of `P` into two lattice polygons of positive size, up to
/// swapping the summands. Each edge of lattice length `L` splits as
/// `k + (L - k)` copies of its primitive vector; a split is admissible when the
/// chosen copies close up. Segments are accepted as well (their two boundary
/// edges are opposite).
pub fn minkowski_decompositions(p: &IntegralPolygon) -> Vec<Decomposition> {
    let edges = p.primitive_edges();
    if edges.is_empty() {
        return Vec::new();
    }
    if p.dimension() == 1 {
        let ((dx, dy), len) = edges[0];
        let start = p.vertices()[0];
        return (1..=len / 2)
            .map(|k| Decomposition {
                first: walk((0, 0), &[((dx, dy), k)]),
                second: walk(start, &[((dx, dy), len - k)]),
            })
            .collect();
    }
    // Reachable ranges of the remaining partial sums, for pruning.
    let n = edges.len();
    let mut suffix = vec![[0i64; 4]; n + 1];
    for i in (0..n).rev() {
        let ((dx, dy), l) = edges[i];
        let s = suffix[i + 1];
        suffix[i] = [s[0] + (dx * l).min(0), s[1] + (dx * l).max(0), s[2] + (dy * l).min(0), s[3] + (dy * l).max(0)];
    }
    let mut out = Vec::new();
    let mut ks = vec![0i64; n];
    search(&edges, &suffix, 0, (0, 0), &mut ks, &mut out);
    let start = p.vertices()[0];
    out.into_iter()
        .filter_map(|ks| {
            let total: i64 = ks.iter().sum();
            let full: i64 = edges.iter().map(|e| e.1).sum();
            if total == 0 || total == full {
                return None;
            }
            let rest: Vec<i64> = edges.iter().zip(&ks).map(|(e, k)| e.1 - k).collect();
            // Keep one of each complementary pair.
            if rest < ks {
                return None;
            }
            let first: Vec<(LatticePoint, i64)> = edges.iter().zip(&ks).map(|(e, &k)| (e.0, k)).collect();
            let second: Vec<(LatticePoint, i64)> = edges.iter().zip(&rest).map(|(e, &k)| (e.0, k)).collect();
            Some(Decomposition { first: walk((0, 0), &first), second: walk(start, &second) })
        })
        .collect()
}

fn search(
    edges: &[(LatticePoint, i64)],
    suffix: &[[i64; 4]],
    i: usize,
    sum: LatticePoint,
    ks: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if i == edges.len() {
        if sum == (0, 0) {
            out.push(ks.clone());
        }
        return;
    }
    let r = suffix[i];
    if -sum.0 < r[0] || -sum.0 > r[1] || -sum.1 < r[2] || -sum.1 > r[3] {
        return;
    }
    let ((dx, dy), l) = edges[i];
    for k in 0..=l {
        ks[i] = k;
        search(edges, suffix, i + 1, (sum.0 + dx * k, sum.1 + dy * k), ks, out);
    }
    ks[i] = 0;
}

/// Exact check of `sqrt|Q1| + sqrt|Q2| <= sqrt|P|` on doubled areas: with
/// `s = A - A1 - A2`, the inequality is `s >= 0` and `4 A1 A2 <= s^2`.
pub fn brunn_minkowski_holds(p: &IntegralPolygon, d: &Decomposition) -> bool {
    let (a, a1, a2) = (p.area2() as i128, d.first.area2() as i128, d.second.area2() as i128);
    let s = a - a1 - a2;
    s >= 0 && 4 * a1 * a2 <= s * s
}
