use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Arithmetic of a finite field of characteristic `p` and degree `degree()` over `F_p`.
///
/// Elements are plain values; all operations go through the field context.
pub trait FiniteField {
    type Elem: Clone + PartialEq + Eq + Ord + Debug;

    fn characteristic(&self) -> u64;
    fn degree(&self) -> usize;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Image of an integer in the prime subfield.
    fn from_u64(&self, n: u64) -> Self::Elem;

    /// The `index`-th element in the fixed enumeration order (coefficient-lexicographic,
    /// lowest degree most significant). Indices at or above the field size wrap.
    fn element(&self, index: u64) -> Self::Elem;

    fn size(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// `a^p`.
    fn frobenius_p(&self, a: &Self::Elem) -> Self::Elem {
        self.pow_u64(a, self.characteristic())
    }

    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut r = a.clone();
        for _ in 1..self.degree() {
            r = self.frobenius_p(&r);
        }
        r
    }

    /// Order of the multiplicative group.
    fn unit_order(&self) -> BigUint {
        self.size() - BigUint::one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.is_zero(a)
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "characteristic must be at least 2");
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `0..p`.
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        1
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.p <= 1 << 32 {
            return a * b % self.p;
        }
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }

    fn element(&self, index: u64) -> u64 {
        index % self.p
    }

    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }

    fn frobenius_p(&self, a: &u64) -> u64 {
        *a
    }
}

/// Converts a `BigUint` that is known to be small.
pub(crate) fn biguint_to_u64(n: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return Some(0);
    }
    let digits = n.to_u64_digits();
    if digits.len() == 1 {
        Some(digits[0])
    } else {
        None
    }
}
