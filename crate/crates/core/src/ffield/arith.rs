//! Integer helpers: primality and factorization of multiplicative group orders.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n))
}

/// Deterministic for `n < 3.3e24`, and a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for sp in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if d != *n {
            return d;
        }
        c += 1u32;
    }
}

/// Sorted distinct prime divisors.
pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return out;
    }
    let mut d = 2u64;
    while d < 10_000 {
        let bd = BigUint::from(d);
        if (&rest % &bd).is_zero() {
            out.push(bd.clone());
            while (&rest % &bd).is_zero() {
                rest /= &bd;
            }
        }
        if &bd * &bd > rest {
            break;
        }
        d += 1;
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        let f = pollard_rho(&m);
        let g = &m / &f;
        stack.push(f);
        stack.push(g);
    }
    out.sort();
    out.dedup();
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Sorted divisors of `n > 0`.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort();
    out
}

pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(!is_prime_u64(91));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn factor_group_orders() {
        // 5^24 - 1
        let n = BigUint::from(5u32).pow(24) - 1u32;
        let ps = prime_divisors(&n);
        let mut m = n.clone();
        for p in &ps {
            assert!(is_probable_prime(p));
            while (&m % p).is_zero() {
                m /= p;
            }
        }
        assert!(m.is_one());
        assert_eq!(
            prime_divisors(&BigUint::from(24u32)),
            vec![BigUint::from(2u32), BigUint::from(3u32)]
        );
    }
}
