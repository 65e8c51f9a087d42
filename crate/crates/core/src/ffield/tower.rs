//! The tower `F_q ⊂ F_{q^2} ⊂ ...` of finite fields inside an algebraic closure of `F_p`,
//! with `q = p^e`.
//!
//! Level `t` is `F_p[x]/(f)` where `f` is the lexicographically least monic irreducible
//! polynomial of degree `e*t` over `F_p` (coefficients compared from the constant term up).
//! Embeddings between levels are chosen once and memoized so that they compose.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::arith::{divisors, is_prime_u64, prime_divisors};
use super::field::{FiniteField, PrimeField};
use super::dense;
use super::fplin;
use super::poly::PolyRing;

pub const DEFAULT_MAX_LEVEL: usize = 24;
pub const DEFAULT_DLOG_CAP: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime below 2^32")]
    InvalidCharacteristic(u64),
    #[error("base degree must be at least 1")]
    InvalidDegree,
    #[error("level {requested} exceeds the level cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("level {from} does not divide level {to}")]
    NotASubfieldLevel { from: usize, to: usize },
    #[error("element is not a generator of the multiplicative group")]
    NotGenerator,
    #[error("group order {order} exceeds the discrete logarithm cap {cap}")]
    DlogCapExceeded { order: String, cap: u64 },
    #[error("zero has no discrete logarithm or inverse")]
    NotInvertible,
    #[error("element does not lie in level {0}")]
    NotInSubfield(usize),
    #[error("malformed field element: {0}")]
    Parse(String),
}

/// An element of the tower, stored at a specific level as its coordinate vector
/// over `F_p` in the power basis of that level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerElem {
    pub level: usize,
    pub coeffs: Vec<u64>,
}

/// One level of the tower, usable as a standalone finite field.
#[derive(Debug)]
pub struct LevelField {
    p: u64,
    e: usize,
    level: usize,
    deg: usize,
    modulus: Vec<u64>,
    frob: Vec<Vec<u64>>,
    order_primes: OnceLock<Vec<BigUint>>,
    generator: OnceLock<TowerElem>,
}

impl LevelField {
    fn new(p: u64, e: usize, level: usize) -> Self {
        Self::with_modulus(p, e, level, least_irreducible(p, e * level))
    }

    /// `F_p[x]/(modulus)` for a monic irreducible `modulus` of degree `e * level`.
    fn with_modulus(p: u64, e: usize, level: usize, modulus: Vec<u64>) -> Self {
        let deg = e * level;
        let mut lf = LevelField {
            p,
            e,
            level,
            deg,
            modulus,
            frob: Vec::new(),
            order_primes: OnceLock::new(),
            generator: OnceLock::new(),
        };
        // images of the basis x^i under a -> a^p
        let x = lf.gen_x();
        let xp = lf.pow_u64(&x, p);
        let mut cols = Vec::with_capacity(deg);
        let mut cur = lf.one();
        for _ in 0..deg {
            cols.push(cur.coeffs.clone());
            cur = lf.mul(&cur, &xp);
        }
        lf.frob = cols;
        lf
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base_degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn prime(&self) -> PrimeField {
        PrimeField::new(self.p)
    }

    /// The class of `x`, a root of the level modulus.
    pub fn gen_x(&self) -> TowerElem {
        let mut c = vec![0u64; self.deg];
        if self.deg > 1 {
            c[1] = 1;
        } else {
            c[0] = (self.p - self.modulus[0]) % self.p;
        }
        TowerElem { level: self.level, coeffs: c }
    }

    fn elem(&self, coeffs: Vec<u64>) -> TowerElem {
        TowerElem { level: self.level, coeffs }
    }

    fn apply_frob_once(&self, a: &TowerElem) -> TowerElem {
        let p = self.p;
        let budget = (u64::MAX - p) / ((p - 1) * (p - 1));
        let mut out = vec![0u64; self.deg];
        let mut used = 0;
        for (&ai, col) in a.coeffs.iter().zip(&self.frob) {
            if ai == 0 {
                continue;
            }
            if used == budget {
                out.iter_mut().for_each(|v| *v %= p);
                used = 0;
            }
            for (o, &c) in out.iter_mut().zip(col) {
                *o += ai * c;
            }
            used += 1;
        }
        out.iter_mut().for_each(|v| *v %= p);
        self.elem(out)
    }

    /// `a^(p^k)`.
    pub fn frobenius_pow(&self, a: &TowerElem, k: i64) -> TowerElem {
        let k = k.rem_euclid(self.deg as i64) as usize;
        let mut r = a.clone();
        for _ in 0..k {
            r = self.apply_frob_once(&r);
        }
        r
    }

    /// The distinct primes dividing `q^t - 1`.
    pub fn order_primes(&self) -> &[BigUint] {
        self.order_primes.get_or_init(|| prime_divisors(&self.unit_order()))
    }

    pub fn is_generator(&self, g: &TowerElem) -> bool {
        if self.is_zero(g) {
            return false;
        }
        let n = self.unit_order();
        self.order_primes()
            .iter()
            .all(|l| !self.is_one(&self.pow(g, &(&n / l))))
    }

    /// The least generator of the multiplicative group in enumeration order.
    pub fn least_generator(&self) -> TowerElem {
        self.generator
            .get_or_init(|| {
                let mut i = 1u64;
                loop {
                    let g = self.element(i);
                    if self.is_generator(&g) {
                        return g;
                    }
                    i += 1;
                }
            })
            .clone()
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: &TowerElem) -> BigUint {
        let mut n = self.unit_order();
        for l in self.order_primes() {
            while (&n % l).is_zero() && self.is_one(&self.pow(a, &(&n / l))) {
                n /= l;
            }
        }
        n
    }
}

fn least_irreducible(p: u64, deg: usize) -> Vec<u64> {
    if deg == 1 {
        return vec![0, 1];
    }
    let mut digits = vec![0u64; deg];
    digits[0] = 1;
    loop {
        let mut cand = digits.clone();
        cand.push(1);
        if dense::is_irreducible(&cand, p) {
            return cand;
        }
        // odometer with the top coefficient varying fastest
        let mut i = deg - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i -= 1;
        }
    }
}

/// The roots in `lt` of a monic irreducible `f` over `F_p` whose degree divides that of
/// `lt`, sorted. They are found in the subfield fixed by `p^deg(f)`-powering, which is
/// presented as `F_p[y]/(g)` through a primitive element.
fn subfield_roots(lt: &LevelField, f: &[u64]) -> Vec<TowerElem> {
    let p = lt.p;
    let fp = PrimeField::new(p);
    let d = lt.deg;
    let k = f.len() - 1;
    let xk = lt.frobenius_pow(&lt.gen_x(), k as i64);
    let mut cols = Vec::with_capacity(d);
    let mut cur = lt.one();
    for _ in 0..d {
        let next = lt.mul(&cur, &xk);
        cols.push(cur.coeffs);
        cur = next;
    }
    let m: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| (cols[j][i] + if i == j { p - 1 } else { 0 }) % p).collect())
        .collect();
    let basis = fplin::kernel(&fp, &m, d);
    assert_eq!(basis.len(), k, "the fixed field has the degree of f");
    for idx in 1u64.. {
        let mut digits = idx;
        let mut theta = vec![0u64; d];
        for b in &basis {
            let c = digits % p;
            digits /= p;
            for (t, &v) in theta.iter_mut().zip(b) {
                *t = (*t + c * v) % p;
            }
        }
        let theta = lt.elem(theta);
        let mut powers = Vec::with_capacity(k + 1);
        let mut cur = lt.one();
        for _ in 0..=k {
            let next = lt.mul(&cur, &theta);
            powers.push(cur);
            cur = next;
        }
        let mat: Vec<Vec<u64>> =
            (0..d).map(|i| powers.iter().map(|w| w.coeffs[i]).collect()).collect();
        let rel = fplin::kernel(&fp, &mat, k + 1);
        if rel.len() != 1 || rel[0][k] != 1 {
            continue;
        }
        let small = LevelField::with_modulus(p, 1, k, rel[0].clone());
        let ring = PolyRing::new(&small);
        let fs: Vec<TowerElem> = f.iter().map(|&c| small.from_u64(c)).collect();
        let mut out: Vec<TowerElem> = ring
            .roots(&fs)
            .into_iter()
            .map(|r| {
                let mut acc = vec![0u64; d];
                for (ri, w) in r.coeffs.iter().zip(&powers) {
                    for (a, &b) in acc.iter_mut().zip(&w.coeffs) {
                        *a = (*a + ri * b) % p;
                    }
                }
                lt.elem(acc)
            })
            .collect();
        out.sort();
        return out;
    }
    unreachable!("a finite field has a primitive element")
}

impl FiniteField for LevelField {
    type Elem = TowerElem;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        self.deg
    }

    fn zero(&self) -> TowerElem {
        self.elem(vec![0; self.deg])
    }

    fn one(&self) -> TowerElem {
        let mut c = vec![0; self.deg];
        c[0] = 1;
        self.elem(c)
    }

    fn is_zero(&self, a: &TowerElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let f = self.prime();
        self.elem(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f.add(x, y)).collect())
    }

    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let f = self.prime();
        self.elem(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f.sub(x, y)).collect())
    }

    fn neg(&self, a: &TowerElem) -> TowerElem {
        let f = self.prime();
        self.elem(a.coeffs.iter().map(|x| f.neg(x)).collect())
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.elem(dense::mulmod(&a.coeffs, &b.coeffs, &self.modulus, self.p))
    }

    fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        if self.is_zero(a) {
            return None;
        }
        let f = self.prime();
        let ring = PolyRing::new(&f);
        let av = ring.trim(a.coeffs.clone());
        let (g, s, _) = ring.xgcd(&av, &self.modulus);
        if !ring.is_one(&g) {
            return None;
        }
        let mut c = s;
        c.resize(self.deg, 0);
        Some(self.elem(c))
    }

    fn from_u64(&self, n: u64) -> TowerElem {
        let mut c = vec![0; self.deg];
        c[0] = n % self.p;
        self.elem(c)
    }

    fn element(&self, mut index: u64) -> TowerElem {
        let mut c = vec![0u64; self.deg];
        for slot in c.iter_mut().rev() {
            *slot = index % self.p;
            index /= self.p;
            if index == 0 {
                break;
            }
        }
        self.elem(c)
    }

    fn frobenius_p(&self, a: &TowerElem) -> TowerElem {
        self.apply_frob_once(a)
    }

    fn pth_root(&self, a: &TowerElem) -> TowerElem {
        self.frobenius_pow(a, -1)
    }
}

/// Limits applied by the tower and by the solvers built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_level: usize,
    pub dlog_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_level: DEFAULT_MAX_LEVEL, dlog_cap: DEFAULT_DLOG_CAP }
    }
}

type EmbedMap = Arc<Vec<Vec<u64>>>;

/// The Frobenius difference field `(F_p-bar, x -> x^q)` realized level by level.
pub struct FieldTower {
    p: u64,
    e: usize,
    caps: Caps,
    levels: Mutex<HashMap<usize, Arc<LevelField>>>,
    embeddings: Mutex<HashMap<(usize, usize), EmbedMap>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("caps", &self.caps)
            .finish()
    }
}

impl FieldTower {
    pub fn new(p: u64, e: usize) -> Result<Self, FieldError> {
        Self::with_caps(p, e, Caps::default())
    }

    pub fn with_caps(p: u64, e: usize, caps: Caps) -> Result<Self, FieldError> {
        if p >= 1 << 32 || !is_prime_u64(p) {
            return Err(FieldError::InvalidCharacteristic(p));
        }
        if e == 0 {
            return Err(FieldError::InvalidDegree);
        }
        Ok(FieldTower {
            p,
            e,
            caps,
            levels: Mutex::new(HashMap::new()),
            embeddings: Mutex::new(HashMap::new()),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    /// `q = p^e`.
    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e as u32)
    }

    pub fn level(&self, t: usize) -> Result<Arc<LevelField>, FieldError> {
        if t == 0 || t > self.caps.max_level {
            return Err(FieldError::CapExceeded { requested: t, cap: self.caps.max_level });
        }
        if let Some(l) = self.levels.lock().unwrap().get(&t) {
            return Ok(l.clone());
        }
        let lf = Arc::new(LevelField::new(self.p, self.e, t));
        let mut guard = self.levels.lock().unwrap();
        Ok(guard.entry(t).or_insert(lf).clone())
    }

    /// Order of the multiplicative group of level `t`.
    pub fn unit_order(&self, t: usize) -> BigUint {
        self.q().pow(t as u32) - BigUint::one()
    }

    pub fn zero(&self, t: usize) -> Result<TowerElem, FieldError> {
        Ok(self.level(t)?.zero())
    }

    pub fn one(&self, t: usize) -> Result<TowerElem, FieldError> {
        Ok(self.level(t)?.one())
    }

    pub fn from_int(&self, n: i64, t: usize) -> Result<TowerElem, FieldError> {
        let r = n.rem_euclid(self.p as i64) as u64;
        Ok(self.level(t)?.from_u64(r))
    }

    fn embed_map(&self, s: usize, t: usize) -> Result<EmbedMap, FieldError> {
        if t % s != 0 {
            return Err(FieldError::NotASubfieldLevel { from: s, to: t });
        }
        if let Some(m) = self.embeddings.lock().unwrap().get(&(s, t)) {
            return Ok(m.clone());
        }
        let ls = self.level(s)?;
        let lt = self.level(t)?;
        let map = if s == t {
            (0..ls.degree())
                .map(|i| {
                    let mut c = vec![0; ls.degree()];
                    c[i] = 1;
                    c
                })
                .collect()
        } else {
            let ring = PolyRing::new(&*lt);
            let roots = subfield_roots(&lt, ls.modulus());
            // constraints from every proper divisor u of s
            let mut constraints = Vec::new();
            for u in divisors(s).into_iter().filter(|&u| u != s) {
                let xu = self.level(u)?.gen_x();
                let in_s = self.apply_map(&self.embed_map(u, s)?, &xu, &ls);
                let in_t = self.apply_map(&self.embed_map(u, t)?, &xu, &lt);
                constraints.push((in_s, in_t));
            }
            let root = roots
                .into_iter()
                .find(|r| {
                    constraints.iter().all(|(ys, yt)| {
                        let poly: Vec<TowerElem> =
                            ys.coeffs.iter().map(|&c| lt.from_u64(c)).collect();
                        ring.eval(&poly, r) == *yt
                    })
                })
                .expect("a compatible embedding always exists");
            let mut powers = Vec::with_capacity(ls.degree());
            let mut cur = lt.one();
            for _ in 0..ls.degree() {
                powers.push(cur.coeffs.clone());
                cur = lt.mul(&cur, &root);
            }
            powers
        };
        let map = Arc::new(map);
        let mut guard = self.embeddings.lock().unwrap();
        Ok(guard.entry((s, t)).or_insert(map).clone())
    }

    fn apply_map(&self, map: &[Vec<u64>], x: &TowerElem, target: &LevelField) -> TowerElem {
        let f = PrimeField::new(self.p);
        let mut out = vec![0u64; target.degree()];
        for (xi, col) in x.coeffs.iter().zip(map) {
            if *xi == 0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                *o = f.add(o, &f.mul(xi, c));
            }
        }
        TowerElem { level: target.level(), coeffs: out }
    }

    /// Image of `x` in level `t`; requires `x.level` to divide `t`.
    pub fn embed(&self, x: &TowerElem, t: usize) -> Result<TowerElem, FieldError> {
        if x.level == t {
            return Ok(x.clone());
        }
        let map = self.embed_map(x.level, t)?;
        let lt = self.level(t)?;
        Ok(self.apply_map(&map, x, &lt))
    }

    /// Brings both elements to the level `lcm` of their levels.
    pub fn common_level(
        &self,
        a: &TowerElem,
        b: &TowerElem,
    ) -> Result<(TowerElem, TowerElem), FieldError> {
        let l = num_integer::lcm(a.level, b.level);
        Ok((self.embed(a, l)?, self.embed(b, l)?))
    }

    /// `sigma^d(x)` where `sigma` is the `q`-power map; `d` may be negative.
    pub fn frobenius(&self, x: &TowerElem, d: i64) -> TowerElem {
        let lf = self.level(x.level).expect("element level is within the cap");
        lf.frobenius_pow(x, d * self.e as i64)
    }

    /// Smallest level containing `x`.
    pub fn min_level(&self, x: &TowerElem) -> usize {
        divisors(x.level)
            .into_iter()
            .find(|&s| self.frobenius(x, s as i64) == *x)
            .unwrap_or(x.level)
    }

    /// Rewrites `x` as an element of level `s`, if it lies there.
    pub fn descend(&self, x: &TowerElem, s: usize) -> Result<TowerElem, FieldError> {
        if s == x.level {
            return Ok(x.clone());
        }
        if x.level % s != 0 {
            return Err(FieldError::NotASubfieldLevel { from: s, to: x.level });
        }
        let map = self.embed_map(s, x.level)?;
        let f = PrimeField::new(self.p);
        let ds = map.len();
        let dt = x.coeffs.len();
        let m: Vec<Vec<u64>> = (0..dt).map(|r| (0..ds).map(|c| map[c][r]).collect()).collect();
        match fplin::solve(&f, &m, &x.coeffs) {
            Some(c) => Ok(TowerElem { level: s, coeffs: c }),
            None => Err(FieldError::NotInSubfield(s)),
        }
    }

    /// Discrete logarithm of `x` to the least generator of its level, by exhaustive search.
    pub fn dlog(&self, x: &TowerElem) -> Result<BigUint, FieldError> {
        let lf = self.level(x.level)?;
        let g = lf.least_generator();
        self.dlog_base(x, &g)
    }

    /// Discrete logarithm of `x` to the base `g`, which must generate the multiplicative group.
    pub fn dlog_base(&self, x: &TowerElem, g: &TowerElem) -> Result<BigUint, FieldError> {
        let (x, g) = self.common_level(x, g)?;
        let lf = self.level(x.level)?;
        if lf.is_zero(&x) {
            return Err(FieldError::NotInvertible);
        }
        let n = lf.unit_order();
        let n64 = match n.to_u64() {
            Some(v) if v <= self.caps.dlog_cap => v,
            _ => {
                return Err(FieldError::DlogCapExceeded {
                    order: n.to_string(),
                    cap: self.caps.dlog_cap,
                })
            }
        };
        if !lf.is_generator(&g) {
            return Err(FieldError::NotGenerator);
        }
        let mut cur = lf.one();
        for k in 0..n64 {
            if cur == x {
                return Ok(BigUint::from(k));
            }
            cur = lf.mul(&cur, &g);
        }
        unreachable!("a generator reaches every unit")
    }

    pub fn format_elem(&self, x: &TowerElem) -> String {
        let body: Vec<String> = x.coeffs.iter().map(|c| c.to_string()).collect();
        format!("p={},e={},t={}:[{}]", self.p, self.e, x.level, body.join(","))
    }

    /// Parses `p=5,e=1,t=2:[3,1]` or a bare integer (placed at level 1).
    pub fn parse_elem(&self, text: &str) -> Result<TowerElem, FieldError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(n) = s.parse::<i64>() {
            return self.from_int(n, 1);
        }
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| FieldError::Parse(format!("expected 'p=..,e=..,t=..:[..]' in {text:?}")))?;
        let mut p = None;
        let mut e = None;
        let mut t = None;
        for part in head.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| FieldError::Parse(format!("bad header field {part:?}")))?;
            let v: u64 =
                v.parse().map_err(|_| FieldError::Parse(format!("bad number {v:?}")))?;
            match k {
                "p" => p = Some(v),
                "e" => e = Some(v as usize),
                "t" => t = Some(v as usize),
                _ => return Err(FieldError::Parse(format!("unknown header field {k:?}"))),
            }
        }
        let (p, e, t) = match (p, e, t) {
            (Some(p), Some(e), Some(t)) => (p, e, t),
            _ => return Err(FieldError::Parse("header needs p, e and t".into())),
        };
        if p != self.p || e != self.e {
            return Err(FieldError::Parse(format!(
                "element over p={p},e={e} does not belong to the tower p={},e={}",
                self.p, self.e
            )));
        }
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| FieldError::Parse("coefficients must be in brackets".into()))?;
        let coeffs: Vec<u64> = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|c| {
                    c.parse::<i64>()
                        .map(|v| v.rem_euclid(self.p as i64) as u64)
                        .map_err(|_| FieldError::Parse(format!("bad coefficient {c:?}")))
                })
                .collect::<Result<_, _>>()?
        };
        let lf = self.level(t)?;
        if coeffs.len() != lf.degree() {
            return Err(FieldError::Parse(format!(
                "level {t} needs {} coefficients, got {}",
                lf.degree(),
                coeffs.len()
            )));
        }
        Ok(TowerElem { level: t, coeffs })
    }
}
