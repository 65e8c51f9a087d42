//! The ring `Z[s]` of integer polynomials in the symbol `s`, which acts on multiplicative
//! groups as `x^(a_0 + a_1 s + ...) = x^a_0 * s(x)^a_1 * ...`.
//!
//! Text syntax: `s^2 - s - 1`, `2*s - 3`, `7`. Whitespace is ignored.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ffield::arith::prime_divisors;
use crate::ffield::{PolyRing, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZsigError {
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("both polynomials are zero")]
    BothZero,
    #[error("units (+1 or -1) have no factorization")]
    UnitInput,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An element of `Z[s]`; `coeffs[i]` is the coefficient of `s^i`, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SigmaPoly {
    coeffs: Vec<BigInt>,
}

impl SigmaPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SigmaPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        SigmaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        SigmaPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        SigmaPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `s^t`.
    pub fn shift(&self, t: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); t];
        c.extend(self.coeffs.iter().cloned());
        SigmaPoly { coeffs: c }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact evaluation at an integer.
    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Greatest common divisor of the coefficients and the primitive part with positive
    /// leading coefficient.
    pub fn content_primitive(&self) -> Result<(BigInt, SigmaPoly), ZsigError> {
        if self.is_zero() {
            return Err(ZsigError::ZeroPolynomial);
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        let mut prim: Vec<BigInt> = self.coeffs.iter().map(|c| c / &g).collect();
        if prim.last().unwrap().is_negative() {
            for c in prim.iter_mut() {
                *c = -&*c;
            }
        }
        Ok((g, SigmaPoly { coeffs: prim }))
    }

    pub fn content(&self) -> BigInt {
        self.content_primitive().map(|(c, _)| c).unwrap_or_default()
    }

    pub fn primitive_part(&self) -> Result<SigmaPoly, ZsigError> {
        self.content_primitive().map(|(_, p)| p)
    }

    /// `self / d` when the quotient lies in `Z[s]`.
    pub fn div_exact(&self, d: &SigmaPoly) -> Option<SigmaPoly> {
        let dl = d.leading()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dd].div_rem(dl);
            if !rem.is_zero() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Canonical order: by degree, then coefficient sequence from the constant term up.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// The reduction modulo a small prime, as a polynomial over `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let bp = BigInt::from(p);
        let mut v: Vec<u64> =
            self.coeffs.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

impl fmt::Display for SigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> ZsigError {
        ZsigError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Some(text.parse().unwrap())
    }

    /// A term without its sign: `c`, `c*s^k`, `c s`, `s^k`.
    fn term(&mut self) -> Result<(BigInt, usize), ZsigError> {
        let coef = self.number();
        let mut has_star = false;
        if coef.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            has_star = true;
        }
        match self.peek() {
            Some(b's') => {
                self.pos += 1;
                let mut exp = 1usize;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.number().ok_or_else(|| self.err("expected an exponent"))?;
                    exp = e.to_usize().ok_or_else(|| self.err("exponent too large"))?;
                }
                Ok((coef.unwrap_or_else(BigInt::one), exp))
            }
            _ if has_star => Err(self.err("expected 's' after '*'")),
            _ => match coef {
                Some(c) => Ok((c, 0)),
                None => Err(self.err("expected a number or 's'")),
            },
        }
    }

    fn poly(&mut self) -> Result<SigmaPoly, ZsigError> {
        let mut acc: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let mut neg = false;
            match self.peek() {
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    neg = true;
                }
                None if first => return Err(self.err("empty polynomial")),
                _ if !first => return Err(self.err("expected '+' or '-'")),
                _ => {}
            }
            let (c, k) = self.term()?;
            if acc.len() <= k {
                acc.resize(k + 1, BigInt::zero());
            }
            if neg {
                acc[k] -= c;
            } else {
                acc[k] += c;
            }
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(SigmaPoly::new(acc))
    }
}

impl FromStr for SigmaPoly {
    type Err = ZsigError;

    fn from_str(s: &str) -> Result<Self, ZsigError> {
        let mut p = Parser { bytes: s.as_bytes(), pos: 0 };
        p.poly()
    }
}

impl Serialize for SigmaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SigmaPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Polynomials over `Q`, used internally for gcds and normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs.last().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Clears denominators and content; positive leading coefficient.
    pub fn to_primitive(&self) -> SigmaPoly {
        if self.is_zero() {
            return SigmaPoly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        SigmaPoly::new(ints).primitive_part().unwrap()
    }

    /// Order used for pivot selection: degree, then coefficients from the constant term up.
    pub fn pivot_cmp(&self, o: &Self) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| self.coeffs.cmp(&o.coeffs))
    }
}

/// The primitive generator of the ideal `(f, g)` of `Q[s]`, with positive leading coefficient;
/// constant gcds are reported as `1`.
pub fn gcd_q(f: &SigmaPoly, g: &SigmaPoly) -> Result<SigmaPoly, ZsigError> {
    if f.is_zero() && g.is_zero() {
        return Err(ZsigError::BothZero);
    }
    Ok(f.to_qpoly().gcd(&g.to_qpoly()).to_primitive())
}

/// A complete factorization in `Z[s]`: `sign * prod(factor^multiplicity)`.
/// Prime integers from the content appear as degree-zero factors and come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(SigmaPoly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> SigmaPoly {
        let mut acc = SigmaPoly::constant(BigInt::from(self.sign));
        for (f, k) in &self.factors {
            acc = acc.mul(&f.pow(*k));
        }
        acc
    }
}

pub fn factor_z(f: &SigmaPoly) -> Result<Factorization, ZsigError> {
    if f.is_zero() {
        return Err(ZsigError::ZeroPolynomial);
    }
    if f.degree() == Some(0) && f.coeffs[0].abs().is_one() {
        return Err(ZsigError::UnitInput);
    }
    let sign: i8 = if f.leading().unwrap().is_negative() { -1 } else { 1 };
    let (content, prim) = f.content_primitive()?;
    let mut factors: Vec<(SigmaPoly, u32)> = Vec::new();

    let c = content.magnitude().clone();
    if !c.is_one() {
        let mut rest = c.clone();
        for p in prime_divisors(&c) {
            let mut k = 0;
            while (&rest % &p).is_zero() {
                rest /= &p;
                k += 1;
            }
            factors.push((SigmaPoly::constant(BigInt::from_biguint(Sign::Plus, p)), k));
        }
    }

    let mut polys: Vec<(SigmaPoly, u32)> = Vec::new();
    if prim.degree().unwrap() > 0 {
        // powers of s
        let zeros = prim.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            polys.push((SigmaPoly::monomial(1), zeros as u32));
        }
        let core = SigmaPoly::new(prim.coeffs[zeros..].to_vec());
        if core.degree().unwrap() > 0 {
            for (sq, k) in squarefree_q(&core) {
                for irr in zassenhaus(&sq) {
                    polys.push((irr, k));
                }
            }
        }
    }
    polys.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    factors.extend(polys);
    Ok(Factorization { sign, factors })
}

/// True iff `f` is irreducible in `Z[s]`.
pub fn is_irreducible(f: &SigmaPoly) -> Result<bool, ZsigError> {
    if f.is_zero() {
        return Err(ZsigError::ZeroPolynomial);
    }
    if f.degree() == Some(0) && f.coeffs[0].abs().is_one() {
        return Ok(false);
    }
    let fac = factor_z(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Yun's squarefree decomposition over `Q`, returned as primitive integer polynomials.
fn squarefree_q(f: &SigmaPoly) -> Vec<(SigmaPoly, u32)> {
    let f = f.to_qpoly();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.divrem(&a0).0;
    let c = df.divrem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.to_primitive(), i));
        }
        b = b.divrem(&a).0;
        let c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Irreducible factors of a squarefree primitive polynomial of positive degree with
/// nonzero constant term, via factorization modulo a prime, Hensel lifting and
/// recombination of lifted factors.
fn zassenhaus(f: &SigmaPoly) -> Vec<SigmaPoly> {
    let n = f.degree().unwrap();
    if n == 1 {
        return vec![f.clone()];
    }
    let lc = f.leading().unwrap().clone();

    // choose among the first few admissible primes the one with fewest modular factors
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = PrimeField::new(p);
        let ring = PolyRing::new(&fp);
        let fbar = f.reduce_mod(p);
        if fbar.len() != n + 1 {
            continue;
        }
        let g = ring.gcd(&fbar, &ring.derivative(&fbar));
        if g.len() != 1 {
            continue;
        }
        let (_, fac) = ring.factor(&fbar);
        let mods: Vec<Vec<u64>> = fac.into_iter().map(|(g, _)| g).collect();
        if mods.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| mods.len() < b.len()) {
            best = Some((p, mods));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mods) = best.expect("some prime does not divide the discriminant");

    // coefficient bound for factors (Mignotte), scaled by the leading coefficient
    let norm2: BigInt = f.coeffs.iter().map(|c| c * c).sum();
    let norm = BigInt::from_biguint(Sign::Plus, norm2.magnitude().sqrt() + BigUint::one());
    let bound = lc.abs() * (BigInt::one() << n) * norm * 2;
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= bound {
        pk *= &bp;
        k += 1;
    }

    let lifted = hensel_lift(f, p, k, &mods);

    // recombination
    let mut remaining: Vec<SigmaPoly> = lifted;
    let mut cur = f.clone();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), s) {
            let clc = cur.leading().unwrap().clone();
            let mut g = SigmaPoly::constant(clc.clone());
            for &i in &subset {
                g = g.mul(&remaining[i]);
            }
            let g = SigmaPoly::new(g.coeffs.iter().map(|c| symmetric_mod(c, &pk)).collect());
            let cand = match g.primitive_part() {
                Ok(c) => c,
                Err(_) => continue,
            };
            if let Some(q) = cur.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                cur = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => s += 1,
        }
    }
    if cur.degree().unwrap_or(0) > 0 {
        found.push(cur.primitive_part().unwrap());
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn to_zpoly(v: &[u64]) -> SigmaPoly {
    SigmaPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn mod_poly(f: &SigmaPoly, m: &BigInt) -> SigmaPoly {
    SigmaPoly::new(f.coeffs.iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts `f = lc * prod(mods)` (mod p) to monic factors modulo `p^k`, one factor at a time.
fn hensel_lift(f: &SigmaPoly, p: u64, k: u32, mods: &[Vec<u64>]) -> Vec<SigmaPoly> {
    let fp = PrimeField::new(p);
    let ring = PolyRing::new(&fp);
    let bp = BigInt::from(p);
    let pk = bp.pow(k);
    let lc = f.leading().unwrap().clone();
    let lc_p = lc.mod_floor(&bp).to_u64().unwrap();

    let mut out = Vec::new();
    let mut target = mod_poly(f, &pk);
    for i in 0..mods.len() - 1 {
        let u0 = mods[i].clone();
        let mut w0 = vec![lc_p];
        for g in &mods[i + 1..] {
            w0 = ring.mul(&w0, g);
        }
        let (g, s, t) = ring.xgcd(&u0, &w0);
        debug_assert!(ring.is_one(&g));
        let mut u = to_zpoly(&u0);
        let mut w = to_zpoly(&w0);
        let mut pj = bp.clone();
        for _ in 1..k {
            let diff = mod_poly(&target.sub(&u.mul(&w)), &pk);
            let e: Vec<u64> = diff
                .coeffs
                .iter()
                .map(|c| (c / &pj).mod_floor(&bp).to_u64().unwrap())
                .collect();
            let e = ring.trim(e);
            // du*w + dw*u = e with deg du < deg u
            let te = ring.mul(&t, &e);
            let (q, du) = ring.divrem(&te, &u0);
            let dw = ring.add(&ring.mul(&s, &e), &ring.mul(&q, &w0));
            u = mod_poly(&u.add(&to_zpoly(&du).scale(&pj)), &pk);
            w = mod_poly(&w.add(&to_zpoly(&dw).scale(&pj)), &pk);
            pj *= &bp;
        }
        out.push(u);
        target = w;
    }
    // the last factor carries the leading coefficient
    let tl = target.leading().unwrap().clone();
    let inv = mod_inverse(&tl, &pk);
    out.push(mod_poly(&target.scale(&inv), &pk));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}
