//! Dense polynomials over `F_p` with `p < 2^32`, coefficients low-first in `0..p`.
//! Products are accumulated in `u64` and reduced only when the next term could overflow.

/// How many products `(p-1)^2` fit into a `u64` accumulator on top of a reduced value.
fn lazy_terms(p: u64) -> usize {
    let sq = (p - 1) * (p - 1);
    if sq == 0 {
        return usize::MAX;
    }
    ((u64::MAX - p) / sq).min(usize::MAX as u64) as usize
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let budget = lazy_terms(p);
    let mut used = 0usize;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if used == budget {
            out.iter_mut().for_each(|v| *v %= p);
            used = 0;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
        used += 1;
    }
    out.iter_mut().for_each(|v| *v %= p);
    out
}

/// `a mod f` for monic `f` of degree at least 1.
pub fn rem_monic(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    if a.len() <= n {
        a.iter_mut().for_each(|v| *v %= p);
        a.resize(n, 0);
        return a;
    }
    let neg: Vec<u64> = f[..n].iter().map(|&m| (p - m) % p).collect();
    let budget = lazy_terms(p);
    let mut used = 0usize;
    for k in (n..a.len()).rev() {
        let c = a[k] % p;
        a[k] = 0;
        if c == 0 {
            continue;
        }
        if used == budget {
            a[..k].iter_mut().for_each(|v| *v %= p);
            used = 0;
        }
        for (o, &m) in a[k - n..k].iter_mut().zip(&neg) {
            *o += c * m;
        }
        used += 1;
    }
    a.truncate(n);
    a.iter_mut().for_each(|v| *v %= p);
    a
}

pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    rem_monic(mul(a, b, p), f, p)
}

pub fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut acc = vec![0u64; n];
    acc[0] = 1 % p;
    let mut b = rem_monic(base.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, f, p);
        }
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

/// Remainder of `a` by a nonzero `b`, both trimmed.
fn rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let li = inv(b[db], p);
    while a.len() > db {
        let k = a.len() - 1;
        let c = a[k] * li % p;
        if c != 0 {
            for (o, &m) in a[k - db..k].iter_mut().zip(b) {
                *o = (*o + (p - c) * m % p) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

/// The degree of `gcd(a, b)`, or `None` if both are zero.
pub fn gcd_degree(a: &[u64], b: &[u64], p: u64) -> Option<usize> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(x, &y, p);
        x = y;
        y = r;
    }
    x.len().checked_sub(1)
}

/// Whether the monic `f` has a root in `F_p`; only sensible for small `p`.
pub fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
}

/// Irreducibility of a monic `f` over `F_p` by distinct-degree splitting.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if p <= 64 && has_root(f, p) {
        return false;
    }
    let mut x = vec![0u64; n];
    x[1] = 1;
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = powmod(&h, p, f, p);
        let mut d = h.clone();
        d[1] = (d[1] + p - 1) % p;
        if gcd_degree(&d, f, p) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles_over_f2_and_f5() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^4 + 1 = (x^2 + 2)(x^2 + 3) over F_5
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 5));
    }

    #[test]
    fn mulmod_matches_schoolbook() {
        let p = 7;
        let f = [3, 1, 0, 1];
        let a = [6, 5, 4];
        let b = [2, 0, 3];
        // (6 + 5x + 4x^2)(2 + 3x^2) = 12 + 10x + 26x^2 + 15x^3 + 12x^4
        let full = mul(&a, &b, p);
        assert_eq!(full, vec![5, 3, 5, 1, 5]);
        let r = mulmod(&a, &b, &f, p);
        // x^3 = -x - 3, x^4 = -x^2 - 3x
        assert_eq!(r, vec![2, 1, 0]);
    }
}
