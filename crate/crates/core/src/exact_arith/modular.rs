//! Word-sized prime-field arithmetic and elimination.

use rand::Rng;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not invertible modulo {p}");
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in increasing order starting at 2.
pub fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// Primes below `2^31` in decreasing order.
pub fn large_primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31)).rev().filter(|&n| is_prime(n))
}

/// A uniformly drawn prime with exactly `bits` bits.
pub fn random_prime<R: Rng>(rng: &mut R, bits: u32) -> u64 {
    assert!((2..=62).contains(&bits));
    loop {
        let n = rng.gen_range(1u64 << (bits - 1)..1u64 << bits) | 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Reduced row echelon form over `F_p`, in place. Returns the pivot columns.
/// Pivot choice: first nonzero entry of the column at or below the current row.
pub fn rref_mod_p(m: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a residue matrix; the input is consumed.
pub fn rank_residues(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    // Forward elimination only; no back substitution needed for the rank.
    let rows = m.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Kernel basis of a matrix already in reduced row echelon form with the
/// given pivots: one vector per free column, with a 1 in that column.
pub fn kernel_from_rref(m: &[Vec<u64>], cols: usize, pivots: &[usize], p: u64) -> Vec<Vec<u64>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, m[k][f], p);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let first: Vec<u64> = small_primes().take(10).collect();
        assert_eq!(first, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(large_primes().next(), Some(2_147_483_647));
    }

    #[test]
    fn inverses() {
        for p in [2u64, 3, 101, 2_147_483_647] {
            for a in 1..50u64.min(p) {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    #[test]
    fn rref_and_kernel() {
        let mut m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let piv = rref_mod_p(&mut m, 3, 7);
        assert_eq!(piv, vec![0]);
        let k = kernel_from_rref(&m, 3, &piv, 7);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (v[0] + 2 * v[1] + 3 * v[2]) % 7;
            assert_eq!(dot, 0);
        }
        assert_eq!(rank_residues(vec![vec![1, 2], vec![2, 4]], 2, 5), 1);
        assert_eq!(rank_residues(vec![vec![1, 2], vec![2, 5]], 2, 5), 2);
    }
}
