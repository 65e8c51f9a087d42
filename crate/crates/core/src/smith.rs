//! Smith normal form over a Euclidean domain, with unimodular transforms.
//!
//! Pivoting is deterministic: the smallest entry under the domain's pivot order wins,
//! ties broken by row-major position.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::zsig::QPoly;

pub trait Euclid: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn divrem(&self, d: &Self) -> (Self, Self);
    /// Smaller means a better pivot; must strictly decrease along Euclidean remainders.
    fn pivot_cmp(&self, o: &Self) -> Ordering;
    /// A unit `u` such that `u * self` is the canonical associate.
    fn normalizing_unit(&self) -> Self;
}

impl Euclid for BigInt {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn divrem(&self, d: &Self) -> (Self, Self) {
        self.div_mod_floor(d)
    }
    fn pivot_cmp(&self, o: &Self) -> Ordering {
        self.abs().cmp(&o.abs())
    }
    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
}

impl Euclid for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn one() -> Self {
        QPoly::one()
    }
    fn is_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QPoly::mul(self, o)
    }
    fn divrem(&self, d: &Self) -> (Self, Self) {
        QPoly::divrem(self, d)
    }
    fn pivot_cmp(&self, o: &Self) -> Ordering {
        QPoly::pivot_cmp(self, o)
    }
    fn normalizing_unit(&self) -> Self {
        match self.coeffs().last() {
            None => QPoly::one(),
            Some(l) => QPoly::new(vec![l.recip()]),
        }
    }
}

pub type Mat<T> = Vec<Vec<T>>;

pub fn identity<T: Euclid>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Euclid>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(T::zero(), |acc, l| {
                        if a[i][l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][l].mul(&b[l][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    /// Left transform, `rows x rows`.
    pub u: Mat<T>,
    /// Right transform, `cols x cols`.
    pub v: Mat<T>,
    /// `U * A * V`, diagonal with each entry dividing the next.
    pub d: Mat<T>,
    pub rank: usize,
}

impl<T: Euclid> SmithForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

fn row_axpy<T: Euclid>(m: &mut Mat<T>, dst: usize, src: usize, q: &T) {
    // row dst -= q * row src
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x = x.sub(&q.mul(y));
        }
    }
}

fn col_axpy<T: Euclid>(m: &mut Mat<T>, dst: usize, src: usize, q: &T) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q.mul(&row[src]);
            row[dst] = row[dst].sub(&t);
        }
    }
}

fn swap_cols<T>(m: &mut Mat<T>, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

pub fn smith_normal_form<T: Euclid>(a: &Mat<T>, cols: usize) -> SmithForm<T> {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            // pivot search
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].pivot_cmp(&d[bi][bj]) == Ordering::Less) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, v, d, rank };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let (q, r) = d[i][t].divrem(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let (q, r) = d[t][j].divrem(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let mut bad_row = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[i][j].is_zero() && !d[i][j].divrem(&d[t][t]).1.is_zero() {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = bad_row {
                let minus_one = T::zero().sub(&T::one());
                row_axpy(&mut d, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            let unit = d[t][t].normalizing_unit();
            if unit != T::one() {
                for x in d[t].iter_mut() {
                    *x = x.mul(&unit);
                }
                for x in u[t].iter_mut() {
                    *x = x.mul(&unit);
                }
            }
            rank += 1;
            break;
        }
    }
    SmithForm { u, v, d, rank }
}

/// Row-style Hermite echelon form over `Z`: nonzero rows with strictly increasing pivot
/// columns, positive pivots, entries above pivots reduced. Zero rows are dropped.
pub fn hermite_rows(a: &Mat<BigInt>, cols: usize) -> Mat<BigInt> {
    let mut m: Mat<BigInt> = a.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][c].is_zero() && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                row_axpy(&mut m, i, r, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    row_axpy(&mut m, i, r, &q);
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}
