//! Dense linear algebra over a prime field `F_p`, row-major `Vec<Vec<u64>>`.

use super::field::{FiniteField, PrimeField};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &PrimeField, m: &mut [Vec<u64>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let p = f.p();
        let pivot = std::mem::take(&mut m[r]);
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = p - row[c];
            for j in c..cols {
                if pivot[j] != 0 {
                    row[j] = (row[j] + factor * pivot[j]) % p;
                }
            }
        }
        m[r] = pivot;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &PrimeField, m: &[Vec<u64>]) -> usize {
    let mut a = m.to_vec();
    rref(f, &mut a).len()
}

/// Basis of the right kernel `{x : m x = 0}`, each vector with a 1 in a free column.
pub fn kernel(f: &PrimeField, m: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let pivots = rref(f, &mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&a[i][free]);
        }
        out.push(v);
    }
    out
}

/// One solution of `m x = b`, or `None` if inconsistent. Free variables are set to zero.
pub fn solve(f: &PrimeField, m: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut a);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][cols];
    }
    Some(x)
}
