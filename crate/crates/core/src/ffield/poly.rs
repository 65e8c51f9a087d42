//! Dense univariate polynomials over a finite field, low degree first.
//!
//! Includes the pieces of Cantor–Zassenhaus factorization needed elsewhere:
//! squarefree decomposition, distinct-degree and equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;

use super::field::FiniteField;

pub type Poly<E> = Vec<E>;

pub struct PolyRing<'a, F: FiniteField> {
    pub field: &'a F,
}

impl<'a, F: FiniteField> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn trim(&self, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
        while let Some(last) = a.last() {
            if self.field.is_zero(last) {
                a.pop();
            } else {
                break;
            }
        }
        a
    }

    pub fn degree(&self, a: &Poly<F::Elem>) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    pub fn x(&self) -> Poly<F::Elem> {
        vec![self.field.zero(), self.field.one()]
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.trim(vec![c])
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn is_one(&self, a: &Poly<F::Elem>) -> bool {
        a.len() == 1 && self.field.is_one(&a[0])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        let out = (0..n)
            .map(|i| self.field.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        let out = (0..n)
            .map(|i| self.field.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.trim(a.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.field.mul(x, y);
                out[i + j] = self.field.add(&out[i + j], &t);
            }
        }
        self.trim(out)
    }

    /// Division with remainder. Panics if `b` is zero.
    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        assert!(!b.is_empty(), "division by the zero polynomial");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let lead_inv = self.field.inv(b.last().unwrap()).expect("nonzero leading coefficient");
        let mut r = a.clone();
        let db = b.len() - 1;
        let mut q = vec![self.field.zero(); a.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.field.mul(&r[k + db], &lead_inv);
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = self.field.mul(&c, bj);
                r[k + j] = self.field.sub(&r[k + j], &t);
            }
            q[k] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(a, &inv)
            }
        }
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn xgcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), self.one());
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.field.inv(l).unwrap();
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let out = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(c, &self.field.from_u64(i as u64)))
            .collect();
        self.trim(out)
    }

    pub fn powmod(
        &self,
        base: &Poly<F::Elem>,
        e: &BigUint,
        modulus: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        let base = self.rem(base, modulus);
        let mut acc = self.rem(&self.one(), modulus);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in a.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// Replaces every coefficient by its p-th root and every `x^{pk}` by `x^k`.
    /// Only meaningful when the derivative vanishes.
    fn pth_root_poly(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let p = self.field.characteristic() as usize;
        let out = a
            .iter()
            .step_by(p)
            .map(|c| self.field.pth_root(c))
            .collect();
        self.trim(out)
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, k)` with
    /// `f = prod g^k`, each `g` squarefree, monic and nonconstant.
    pub fn squarefree(&self, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, u32)> {
        let mut out = Vec::new();
        self.squarefree_into(&self.monic(f), 1, &mut out);
        out
    }

    fn squarefree_into(&self, f: &Poly<F::Elem>, mult: u32, out: &mut Vec<(Poly<F::Elem>, u32)>) {
        if f.len() <= 1 {
            return;
        }
        let p = self.field.characteristic() as u32;
        let df = self.derivative(f);
        if df.is_empty() {
            let root = self.pth_root_poly(f);
            self.squarefree_into(&root, mult * p, out);
            return;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.divrem(f, &c).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let z = self.divrem(&w, &y).0;
            if z.len() > 1 {
                out.push((self.monic(&z), i * mult));
            }
            i += 1;
            w = y;
            c = self.divrem(&c, &w).0;
        }
        if c.len() > 1 {
            let root = self.pth_root_poly(&c);
            self.squarefree_into(&root, mult * p, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(g_d, d)` where `g_d` is the product of the irreducible factors of degree `d`.
    pub fn distinct_degree(&self, f: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
        let q = self.field.size();
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x = self.x();
        let mut h = self.rem(&x, &rest);
        let mut d = 0usize;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                let deg = rest.len() - 1;
                out.push((rest, deg));
                break;
            }
            h = self.powmod(&h, &q, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    /// Deterministic sequence of splitting candidates: `x + c` for every field element `c`
    /// in enumeration order, then monic quadratics, and so on.
    fn split_candidate(&self, mut j: u64) -> Option<Poly<F::Elem>> {
        let q = self.field.size();
        let mut deg = 1u32;
        loop {
            let block = q.pow(deg);
            if BigUint::from(j) < block {
                let mut coeffs = Vec::with_capacity(deg as usize + 1);
                let qq = crate::ffield::field::biguint_to_u64(&q);
                for _ in 0..deg {
                    match qq {
                        Some(qv) => {
                            coeffs.push(self.field.element(j % qv));
                            j /= qv;
                        }
                        None => {
                            coeffs.push(self.field.element(j));
                            j = 0;
                        }
                    }
                }
                coeffs.push(self.field.one());
                return Some(coeffs);
            }
            j -= crate::ffield::field::biguint_to_u64(&block)?;
            deg += 1;
            if deg > 64 {
                return None;
            }
        }
    }

    /// Splits a monic squarefree polynomial whose irreducible factors all have degree `d`.
    pub fn equal_degree(&self, f: &Poly<F::Elem>, d: usize) -> Vec<Poly<F::Elem>> {
        let f = self.monic(f);
        let n = f.len() - 1;
        if n == d {
            return vec![f];
        }
        let p = self.field.characteristic();
        let mut j = 0u64;
        loop {
            let a = match self.split_candidate(j) {
                Some(a) => a,
                None => return vec![f],
            };
            j += 1;
            if a.len() - 1 >= n {
                continue;
            }
            let g0 = self.gcd(&a, &f);
            if g0.len() > 1 && g0.len() < f.len() {
                return self.equal_degree_pair(&f, g0, d);
            }
            let b = if p == 2 {
                // trace from F_{2^{kd}} down to F_2
                let steps = self.field.degree() * d;
                let mut t = self.rem(&a, &f);
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = self.rem(&self.mul(&t, &t), &f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                let e = (self.field.size().pow(d as u32) - BigUint::one()) >> 1;
                let r = self.powmod(&a, &e, &f);
                self.sub(&r, &self.one())
            };
            let g = self.gcd(&b, &f);
            if g.len() > 1 && g.len() < f.len() {
                return self.equal_degree_pair(&f, g, d);
            }
        }
    }

    fn equal_degree_pair(
        &self,
        f: &Poly<F::Elem>,
        g: Poly<F::Elem>,
        d: usize,
    ) -> Vec<Poly<F::Elem>> {
        let h = self.divrem(f, &g).0;
        let mut out = self.equal_degree(&g, d);
        out.extend(self.equal_degree(&h, d));
        out
    }

    /// Full factorization: leading coefficient and sorted monic irreducible factors with
    /// multiplicities.
    pub fn factor(&self, f: &Poly<F::Elem>) -> (F::Elem, Vec<(Poly<F::Elem>, u32)>) {
        assert!(!f.is_empty(), "cannot factor the zero polynomial");
        let lc = f.last().unwrap().clone();
        let mut out = Vec::new();
        for (g, k) in self.squarefree(f) {
            for (gd, d) in self.distinct_degree(&g) {
                for h in self.equal_degree(&gd, d) {
                    out.push((h, k));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.len(), a.0.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>()))
        });
        // merge repeated factors coming from different squarefree layers
        let mut merged: Vec<(Poly<F::Elem>, u32)> = Vec::new();
        for (g, k) in out {
            match merged.last_mut() {
                Some(last) if last.0 == g => last.1 += k,
                _ => merged.push((g, k)),
            }
        }
        (lc, merged)
    }

    /// Distinct roots in the coefficient field, sorted.
    pub fn roots(&self, f: &Poly<F::Elem>) -> Vec<F::Elem> {
        if f.len() <= 1 {
            return Vec::new();
        }
        let f = self.monic(f);
        let q = self.field.size();
        let x = self.x();
        let xq = self.powmod(&x, &q, &f);
        let lin = self.gcd(&self.sub(&xq, &x), &f);
        if lin.len() <= 1 {
            return Vec::new();
        }
        let mut out: Vec<F::Elem> = self
            .equal_degree(&lin, 1)
            .into_iter()
            .map(|g| self.field.neg(&g[0]))
            .collect();
        out.sort();
        out
    }

    pub fn is_irreducible(&self, f: &Poly<F::Elem>) -> bool {
        if f.len() <= 1 {
            return false;
        }
        let n = f.len() - 1;
        let f = self.monic(f);
        let q = self.field.size();
        let x = self.x();
        let mut h = self.rem(&x, &f);
        for _ in 1..=n / 2 {
            h = self.powmod(&h, &q, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    pub fn is_zero(&self, a: &Poly<F::Elem>) -> bool {
        a.is_empty() || a.iter().all(|c| self.field.is_zero(c))
    }
}

/// Exponentiation helper used by callers that only have a `u64` exponent.
pub fn big(e: u64) -> BigUint {
    BigUint::from(e)
}
