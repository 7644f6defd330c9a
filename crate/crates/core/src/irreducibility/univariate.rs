//! Dense univariate polynomials over `F_p` (coefficients low to high, no
//! trailing zeros) and their factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_arith::modular::{add_mod, inv_mod, mul_mod, sub_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

fn is_one(a: &[u64]) -> bool {
    a == [1]
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect())
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(out)
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + b.len() - 1], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = sub_mod(r[k + j], mul_mod(c, y, p), p);
            }
        }
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&x| mul_mod(x, inv, p)).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod((i as u64) % p, c, p)).collect())
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_rem(&result, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        e >>= 1;
    }
    result
}

/// Square-free decomposition of a monic polynomial: pairs `(g, i)` with the
/// `g` square-free, pairwise coprime, and `f = prod g^i`.
pub fn squarefree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if degree(f).unwrap_or(0) == 0 {
        return out;
    }
    let mut c = gcd(f, &derivative(f, p), p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(&w, &c, p);
        let fac = divrem(&w, &y, p).0;
        if degree(&fac).unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        i += 1;
        c = divrem(&c, &y, p).0;
        w = y;
    }
    if degree(&c).unwrap_or(0) > 0 {
        // c is a p-th power; over F_p the root just spaces out coefficients.
        let root: Poly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: Poly = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = pow_rem(&h, p, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if !is_one(&g) {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(k) = degree(&rest).filter(|&k| k > 0) {
        out.push((rest, k));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d` (Cantor–Zassenhaus;
/// trace map in characteristic 2).
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = degree(f).unwrap();
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = mul_rem(&t, &t, f, p);
                s = add(&s, &t, p);
            }
            s
        } else {
            // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2).
            let mut t = a.clone();
            let mut u = a.clone();
            for _ in 1..d {
                t = pow_rem(&t, p, f, p);
                u = mul_rem(&u, &t, f, p);
            }
            sub(&pow_rem(&u, (p - 1) / 2, f, p), &[1], p)
        };
        let g = gcd(f, &b, p);
        let k = degree(&g).unwrap_or(0);
        if k > 0 && k < n {
            let other = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization: leading coefficient and monic irreducible factors
/// with multiplicities, sorted.
pub fn factor(f: &[u64], p: u64) -> (u64, Vec<(Poly, usize)>) {
    let f = trim(f.to_vec());
    let lc = *f.last().expect("nonzero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ ((f.len() as u64) << 32));
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (g, m) in squarefree(&monic(&f, p), p) {
        for (h, d) in distinct_degree(&g, p) {
            for q in equal_degree(&h, d, p, &mut rng) {
                out.push((q, m));
            }
        }
    }
    out.sort();
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (q, m) in out {
        match merged.last_mut() {
            Some(last) if last.0 == q => last.1 += m,
            _ => merged.push((q, m)),
        }
    }
    (lc, merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product(lc: u64, fs: &[(Poly, usize)], p: u64) -> Poly {
        let mut acc = vec![lc];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    /// Irreducibility by brute force: no monic divisor of degree <= n/2.
    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = degree(f).unwrap();
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for code in 0..total {
                let mut g = vec![0u64; d + 1];
                let mut c = code;
                for x in g.iter_mut().take(d) {
                    *x = c % p;
                    c /= p;
                }
                g[d] = 1;
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn known_factorizations() {
        // x^2 + 1 over F_5 = (x + 2)(x + 3).
        let (lc, fs) = factor(&[1, 0, 1], 5);
        assert_eq!((lc, fs), (1, vec![(vec![2, 1], 1), (vec![3, 1], 1)]));
        // x^4 + x + 1 is irreducible over F_2.
        assert_eq!(factor(&[1, 1, 0, 0, 1], 2).1.len(), 1);
        // (x + 1)^4 = x^4 + 1 over F_2.
        assert_eq!(factor(&[1, 0, 0, 0, 1], 2).1, vec![(vec![1, 1], 4)]);
        // x^9 - x over F_3 is the product of all monic irreducibles of
        // degree 1 and 2: three linear and three quadratic.
        let (_, fs) = factor(&[0, 2, 0, 0, 0, 0, 0, 0, 0, 1], 3);
        let degs: Vec<usize> = fs.iter().map(|(g, _)| degree(g).unwrap()).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 3);
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
    }

    proptest! {
        #[test]
        fn factorization_is_sound(coeffs in prop::collection::vec(0u64..7, 2..12), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let f = trim(coeffs.iter().map(|c| c % p).collect());
            prop_assume!(degree(&f).unwrap_or(0) >= 1);
            let (lc, fs) = factor(&f, p);
            prop_assert_eq!(product(lc, &fs, p), f.clone());
            for (g, _) in &fs {
                if degree(g).unwrap() <= 5 {
                    prop_assert!(brute_irreducible(g, p));
                }
            }
        }
    }
}
