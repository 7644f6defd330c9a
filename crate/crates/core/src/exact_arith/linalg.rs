use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modular::{kernel_from_rref, large_primes, rank_residues, rref_mod_p};
use super::scalar::{reduce_bigint, Char, Scalar};
use crate::error::{Error, Result};

/// Generalized binomial coefficient `n (n-1) ... (n-k+1) / k!`, valid for
/// negative `n`.
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_i64(n: i64, k: u64) -> BigInt {
    binomial(&BigInt::from(n), k)
}

/// `binomial(n, k)` for `k = 0..len`.
pub fn binomial_row(n: i64, len: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(len);
    let mut acc = BigInt::one();
    let n = BigInt::from(n);
    for i in 0..len as u64 {
        row.push(acc.clone());
        acc = acc * (&n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    row
}

/// Dense matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    ch: Char,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, ch: Char) -> Self {
        Matrix { rows, cols, ch, entries: vec![Scalar::zero(ch); rows * cols] }
    }

    pub fn identity(n: usize, ch: Char) -> Self {
        let mut m = Self::zeros(n, n, ch);
        for i in 0..n {
            m.set(i, i, Scalar::one(ch));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, ch: Char) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Invalid("ragged matrix rows".into()));
            }
            for x in row {
                if x.char() != ch {
                    return Err(Error::CharMismatch(x.char(), ch));
                }
                entries.push(x);
            }
        }
        Ok(Matrix { rows: n, cols, ch, entries })
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>], cols: usize, ch: Char) -> Self {
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|x| Scalar::from_bigint(x, ch))
            })
            .collect();
        Matrix { rows: rows.len(), cols, ch, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]], ch: Char) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_int_rows(&big, cols, ch)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn char(&self) -> Char {
        self.ch
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.char(), self.ch);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(self.ch), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Integer rows with the same right kernel: each rational row is scaled by
    /// the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.as_rational().unwrap().denom()));
                row.iter().map(|x| (x.as_rational().unwrap() * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    fn residue_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.residue().unwrap()).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        if self.ch == 0 {
            bareiss_echelon(self.integer_rows(), self.cols).1.len()
        } else {
            rank_residues(self.residue_rows(), self.cols, self.ch)
        }
    }

    /// Basis of the right kernel, one vector per non-pivot column, each scaled
    /// so that its first nonzero entry is 1. Uses fraction-free elimination
    /// over the rationals and ordinary elimination over `F_p`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let basis: Vec<Vec<Scalar>> = if self.ch == 0 {
            bareiss_nullspace(&self.integer_rows(), self.cols)
                .into_iter()
                .map(|v| v.into_iter().map(Scalar::Rational).collect())
                .collect()
        } else {
            let mut m = self.residue_rows();
            let piv = rref_mod_p(&mut m, self.cols, self.ch);
            kernel_from_rref(&m, self.cols, &piv, self.ch)
                .into_iter()
                .map(|v| v.into_iter().map(|x| Scalar::Residue { value: x, modulus: self.ch }).collect())
                .collect()
        };
        basis.into_iter().map(normalize_first_one).collect()
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_first_one(v: Vec<Scalar>) -> Vec<Scalar> {
    let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
        return v;
    };
    let inv = lead.inv().unwrap();
    v.iter().map(|x| x * &inv).collect()
}

/// Fraction-free forward elimination. Returns the echelon rows and the pivot
/// columns. Every intermediate entry is a minor of the input, so all divisions
/// are exact.
fn bareiss_echelon(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let (top, bottom) = m.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = &prow[c] * &row[j] - &row[c] * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        // Rows above the pivot row were finalized when their pivot was taken;
        // the untouched columns left of c in later rows are already zero.
        prev = top[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rational kernel basis of an integer matrix via Bareiss elimination and back
/// substitution; vector `k` has a 1 in the `k`-th free column and 0 in the
/// other free columns.
pub fn bareiss_nullspace(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigRational>> {
    let (ech, pivots) = bareiss_echelon(m.to_vec(), cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for k in (0..pivots.len()).rev() {
                let pc = pivots[k];
                let mut s = BigRational::zero();
                for j in pc + 1..cols {
                    if !x[j].is_zero() && !ech[k][j].is_zero() {
                        s += &x[j] * BigRational::from_integer(ech[k][j].clone());
                    }
                }
                x[pc] = -s / BigRational::from_integer(ech[k][pc].clone());
            }
            x
        })
        .collect()
}

/// Rank of an integer matrix reduced modulo `p`.
pub fn rank_mod_p(m: &[Vec<BigInt>], cols: usize, p: u64) -> usize {
    let red = m.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
    rank_residues(red, cols, p)
}

/// Recovers `n/d` with `|n|, d <= sqrt(m/2)` from `u mod m`, if it exists.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Upper bound on the number of primes used by [`rational_kernel`].
const MAX_PRIMES: usize = 4000;

/// Exact rational kernel of an integer matrix by multimodular elimination.
///
/// Each 31-bit prime gives an RREF kernel basis; the pivot pattern of maximal
/// rank (ties broken by the lexicographically smallest pivot list) is kept,
/// residues are combined by CRT and rationally reconstructed, and the result is
/// accepted only once it satisfies `M x = 0` exactly over the integers. Since
/// the rational nullity never exceeds the modular one, a verified basis of the
/// modular size is a basis of the rational kernel. Returns the same basis as
/// [`bareiss_nullspace`].
pub fn rational_kernel(m: &[Vec<BigInt>], cols: usize) -> Result<Vec<Vec<BigRational>>> {
    if m.is_empty() {
        return Ok(bareiss_nullspace(m, cols));
    }
    let mut best: Option<(Vec<usize>, Vec<Vec<BigInt>>, BigInt)> = None;
    for p in large_primes().take(MAX_PRIMES) {
        let mut red: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
        let piv = rref_mod_p(&mut red, cols, p);
        if piv.len() == cols {
            return Ok(Vec::new());
        }
        let ker = kernel_from_rref(&red, cols, &piv, p);
        let better = match &best {
            None => true,
            Some((bp, _, _)) => piv.len() > bp.len() || (piv.len() == bp.len() && piv < *bp),
        };
        if better {
            let acc = ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            best = Some((piv, acc, BigInt::from(p)));
        } else if best.as_ref().unwrap().0 == piv {
            let (_, acc, modulus) = best.as_mut().unwrap();
            let bp = BigInt::from(p);
            let inv = BigInt::from(super::modular::inv_mod(reduce_bigint(modulus, p), p));
            for (av, kv) in acc.iter_mut().zip(&ker) {
                for (a, &k) in av.iter_mut().zip(kv) {
                    let diff = (BigInt::from(k) - &*a).mod_floor(&bp);
                    let h = (diff * &inv).mod_floor(&bp);
                    *a += &*modulus * h;
                }
            }
            *modulus *= &bp;
        } else {
            continue;
        }
        let (_, acc, modulus) = best.as_ref().unwrap();
        if let Some(basis) = reconstruct_basis(acc, modulus) {
            if basis.iter().all(|x| annihilates(m, x)) {
                return Ok(basis);
            }
        }
    }
    Err(Error::Budget(format!("multimodular kernel did not stabilize within {MAX_PRIMES} primes")))
}

fn reconstruct_basis(acc: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<BigRational>>> {
    acc.iter()
        .map(|v| v.iter().map(|a| rational_reconstruct(a, modulus)).collect::<Option<Vec<_>>>())
        .collect()
}

fn annihilates(m: &[Vec<BigInt>], x: &[BigRational]) -> bool {
    let l = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let y: Vec<BigInt> = x.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    m.iter().all(|row| {
        row.iter()
            .zip(&y)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(BigInt::zero(), |s, (a, b)| s + a * b)
            .is_zero()
    })
}

/// Kernel of an integer matrix over the prime field of characteristic `ch`,
/// normalized to first-nonzero-one vectors.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize, ch: Char) -> Result<Vec<Vec<Scalar>>> {
    let basis: Vec<Vec<Scalar>> = if ch == 0 {
        rational_kernel(m, cols)?.into_iter().map(|v| v.into_iter().map(Scalar::Rational).collect()).collect()
    } else {
        let mut red: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| reduce_bigint(x, ch)).collect()).collect();
        let piv = rref_mod_p(&mut red, cols, ch);
        kernel_from_rref(&red, cols, &piv, ch)
            .into_iter()
            .map(|v| v.into_iter().map(|x| Scalar::Residue { value: x, modulus: ch }).collect())
            .collect()
    };
    Ok(basis.into_iter().map(normalize_first_one).collect())
}

/// Nullity of an integer matrix over the field of characteristic `ch`.
pub fn integer_nullity(m: &[Vec<BigInt>], cols: usize, ch: Char) -> Result<usize> {
    if ch == 0 {
        Ok(rational_kernel(m, cols)?.len())
    } else {
        Ok(cols - rank_mod_p(m, cols, ch))
    }
}
