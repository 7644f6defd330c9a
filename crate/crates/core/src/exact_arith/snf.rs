use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |s, k| s + &row[k] * &b[k][j])).collect()
        })
        .collect()
}

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, nonnegative, length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v, m, n);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..m {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, &BigInt::from(-1));
                    row_axpy(&mut u, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    finish(d, u, v, m, n)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, m: usize, n: usize) -> Smith {
    let diagonal = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    Smith { diagonal, u, v }
}

/// `row_i -= q * row_k`
fn row_axpy(a: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    let src = a[k].clone();
    for (x, y) in a[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

/// `col_j -= q * col_k`
fn col_axpy(a: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let y = row[k].clone();
        row[j] -= q * y;
    }
}

/// Row-style Hermite normal form: echelon rows with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let m = h.len();
    let n = h.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pick = (r..m).filter(|&i| !h[i][c].is_zero()).min_by_key(|&i| h[i][c].abs());
            let Some(p) = pick else { break };
            h.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                let q = h[i][c].div_floor(&h[r][c]);
                row_axpy(&mut h, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[r][c].is_zero() {
            if h[r][c].is_negative() {
                for x in h[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = h[i][c].div_floor(&h[r][c]);
                row_axpy(&mut h, i, r, &q);
            }
            r += 1;
        }
    }
    h.truncate(r);
    h
}

pub fn det2(a: &[i64; 2], b: &[i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}
