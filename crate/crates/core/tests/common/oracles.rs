//! Reference computations that share no algorithmic path with the library routines they
//! check: Kronecker factorization, bounded torsion search, exhaustive unit search, and a
//! direct prime-field linear solve.

use difftorsor::ffield::{FieldTower, FiniteField, TowerElem};
use difftorsor::zsig::SigmaPoly;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Integer polynomial, low-first, no trailing zeros.
pub type IPoly = Vec<i64>;

pub fn trim(mut f: IPoly) -> IPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn to_ipoly(f: &SigmaPoly) -> IPoly {
    f.coeffs().iter().map(|c| c.to_i64().expect("small coefficients")).collect()
}

pub fn from_ipoly(f: &[i64]) -> SigmaPoly {
    SigmaPoly::from_i64s(f)
}

pub fn imul(a: &[i64], b: &[i64]) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `f / g` if `g` divides `f` in `Z[s]`.
pub fn idiv_exact(f: &[i64], g: &[i64]) -> Option<IPoly> {
    let g = trim(g.to_vec());
    assert!(!g.is_empty());
    let mut r = trim(f.to_vec());
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < g.len() {
        return None;
    }
    let lg = *g.last().unwrap();
    let mut q = vec![0i64; r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let lr = *r.last().unwrap();
        if lr % lg != 0 {
            return None;
        }
        let c = lr / lg;
        let shift = r.len() - g.len();
        q[shift] = c;
        for (j, gj) in g.iter().enumerate() {
            r[shift + j] -= c * gj;
        }
        r = trim(r);
    }
    if r.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

fn eval(f: &[i64], x: i64) -> i64 {
    f.iter().rev().fold(0i64, |acc, &c| acc * x + c)
}

fn divisors_signed(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
            out.push(-d);
        }
    }
    out
}

/// The integer polynomial of degree at most `xs.len() - 1` through the points, if its
/// coefficients are integers.
fn interpolate(xs: &[i64], ys: &[i64]) -> Option<IPoly> {
    let n = xs.len();
    let mut coeffs = vec![Ratio::<i128>::zero(); n];
    for i in 0..n {
        // Lagrange basis polynomial for point i
        let mut basis = vec![Ratio::<i128>::from_integer(1)];
        let mut denom = Ratio::<i128>::from_integer(1);
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![Ratio::<i128>::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += *b;
                next[k] -= *b * Ratio::from_integer(xs[j] as i128);
            }
            basis = next;
            denom *= Ratio::from_integer((xs[i] - xs[j]) as i128);
        }
        let scale = Ratio::from_integer(ys[i] as i128) / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += *b * scale;
        }
    }
    let mut out = Vec::with_capacity(n);
    for c in coeffs {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer().to_i64()?);
    }
    Some(trim(out))
}

fn normalize_sign(f: IPoly) -> IPoly {
    if f.last().is_some_and(|&c| c < 0) {
        f.into_iter().map(|c| -c).collect()
    } else {
        f
    }
}

/// A nonconstant factor of the primitive `f` of degree at most `deg f / 2`, by Kronecker's
/// method, or `None` if `f` is irreducible.
fn kronecker_factor(f: &[i64]) -> Option<IPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return None;
    }
    let points: Vec<i64> = (0..).map(|i: i64| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }).take(n + 4).collect();
    for &x in &points {
        if eval(f, x) == 0 {
            return Some(vec![-x, 1]);
        }
    }
    for d in 1..=n / 2 {
        let xs: Vec<i64> = points[..=d].to_vec();
        let choices: Vec<Vec<i64>> = xs.iter().map(|&x| divisors_signed(eval(f, x))).collect();
        let mut idx = vec![0usize; d + 1];
        loop {
            // the sign of a factor is free, so fix the first value positive
            if choices[0][idx[0]] > 0 {
                let ys: Vec<i64> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                if let Some(g) = interpolate(&xs, &ys) {
                    if g.len() == d + 1 && idiv_exact(f, &g).is_some() {
                        return Some(normalize_sign(g));
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    None
}

/// `(sign, |content|, sorted primitive irreducible factors with positive leading
/// coefficient, repeated by multiplicity)`.
pub fn kronecker_factorization(f: &[i64]) -> (i64, i64, Vec<IPoly>) {
    let f = trim(f.to_vec());
    assert!(!f.is_empty(), "nonzero input");
    let sign = f.last().unwrap().signum();
    let content = f.iter().fold(0i64, |g, &c| g.gcd(&c));
    let mut stack = vec![normalize_sign(f.iter().map(|c| c / content).collect())];
    let mut out = Vec::new();
    while let Some(g) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        match kronecker_factor(&g) {
            Some(h) => {
                let rest = idiv_exact(&g, &h).expect("a found factor divides");
                stack.push(normalize_sign(rest));
                stack.push(h);
            }
            None => out.push(g),
        }
    }
    out.sort_by(|a, b| (a.len(), a.iter().rev().collect::<Vec<_>>()).cmp(&(b.len(), b.iter().rev().collect::<Vec<_>>())));
    (sign, content.abs(), out)
}

pub fn is_prime_small(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Irreducibility in `Z[s]` from the Kronecker factorization.
pub fn kronecker_irreducible(f: &[i64]) -> bool {
    let f = trim(f.to_vec());
    if f.len() == 1 {
        return is_prime_small(f[0].abs());
    }
    let (_, content, factors) = kronecker_factorization(&f);
    content == 1 && factors.len() == 1
}

/// A pair `(l, r)` with `l * r` in `(alpha)` but `r` not in `(alpha)`, searched over primes
/// `l <= 10` and `l * r = alpha * u` with `u` of degree at most 1 and height at most 2.
pub fn torsion_witness(alpha: &[i64]) -> Option<(i64, IPoly)> {
    let alpha = trim(alpha.to_vec());
    if alpha.is_empty() {
        return None;
    }
    for l in [2i64, 3, 5, 7] {
        for u0 in -2..=2i64 {
            for u1 in -2..=2i64 {
                let u = trim(vec![u0, u1]);
                if u.is_empty() {
                    continue;
                }
                let lr = imul(&alpha, &u);
                if lr.iter().any(|c| c % l != 0) {
                    continue;
                }
                let r: IPoly = lr.iter().map(|c| c / l).collect();
                if idiv_exact(&r, &alpha).is_none() {
                    return Some((l, r));
                }
            }
        }
    }
    None
}

/// `x^beta` at the level of `x`, computed as `prod sigma^i(x)^{b_i}`.
pub fn apply_relator(tower: &FieldTower, beta: &SigmaPoly, x: &TowerElem) -> TowerElem {
    let lf = tower.level(x.level).unwrap();
    let mut acc = lf.one();
    for (i, b) in beta.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let y = tower.frobenius(x, i as i64);
        let base = if b.is_negative() { lf.inv(&y).unwrap() } else { y };
        acc = lf.mul(&acc, &lf.pow(&base, b.magnitude()));
    }
    acc
}

/// Every unit `x` of level `t` with `x^beta = a`.
pub fn unit_solutions(tower: &FieldTower, t: usize, beta: &SigmaPoly, a: &TowerElem) -> Vec<TowerElem> {
    let lf = tower.level(t).unwrap();
    let a = tower.embed(a, t).unwrap();
    let size = lf.size().to_u64().unwrap();
    (1..size)
        .map(|i| lf.element(i))
        .filter(|x| !lf.is_zero(x))
        .filter(|x| apply_relator(tower, beta, x) == a)
        .collect()
}

/// Row reduction mod `p` of the augmented system; `Some(x)` if consistent.
fn solve_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> Option<Vec<u64>> {
    let n = rows.first().map_or(0, |r| r.len() - 1);
    let inv = |a: u64| -> u64 {
        let e = BigUint::from(p - 2);
        BigUint::from(a).modpow(&e, &BigUint::from(p)).to_u64().unwrap()
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let iv = inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = *v * iv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..=n {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0u64; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n];
    }
    Some(x)
}

/// The `F_p`-matrix (columns are images of the power basis) of
/// `x -> sigma^m(x) + lambda_{m-1} sigma^{m-1}(x) + ... + lambda_0 x` on level `t`.
pub fn additive_matrix(tower: &FieldTower, lambdas: &[TowerElem], t: usize) -> Vec<Vec<u64>> {
    let lf = tower.level(t).unwrap();
    let d = lf.degree();
    let lam: Vec<TowerElem> = lambdas.iter().map(|l| tower.embed(l, t).unwrap()).collect();
    let m = lam.len();
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let mut c = vec![0u64; d];
        c[j] = 1;
        let x = TowerElem { level: t, coeffs: c };
        let mut y = tower.frobenius(&x, m as i64);
        for (i, l) in lam.iter().enumerate() {
            y = lf.add(&y, &lf.mul(l, &tower.frobenius(&x, i as i64)));
        }
        cols.push(y.coeffs);
    }
    (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect()
}

/// A solution of `L(x) = a` at level `t` by direct linear algebra over `F_p`.
pub fn additive_direct(tower: &FieldTower, lambdas: &[TowerElem], a: &TowerElem, t: usize) -> Option<TowerElem> {
    let p = tower.p();
    let mat = additive_matrix(tower, lambdas, t);
    let rhs = tower.embed(a, t).unwrap();
    let rows = mat.into_iter().zip(&rhs.coeffs).map(|(mut r, &b)| {
        r.push(b);
        r
    });
    solve_mod_p(rows.collect(), p).map(|x| TowerElem { level: t, coeffs: x })
}

/// `M x = a` with the directly built matrix.
pub fn additive_check(tower: &FieldTower, lambdas: &[TowerElem], a: &TowerElem, x: &TowerElem) -> bool {
    let p = tower.p();
    let mat = additive_matrix(tower, lambdas, x.level);
    let rhs = tower.embed(a, x.level).unwrap();
    mat.iter().zip(&rhs.coeffs).all(|(row, &b)| {
        row.iter().zip(&x.coeffs).fold(0u64, |acc, (m, v)| (acc + m * v) % p) == b
    })
}
