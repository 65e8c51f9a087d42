//! Square and rectangular matrices over one level of the tower.

use super::field::FiniteField;
use super::tower::{FieldError, FieldTower, LevelField, TowerElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub level: usize,
    /// Row-major entries, all stored at `level`.
    pub entries: Vec<TowerElem>,
}

impl Matrix {
    pub fn zeros(lf: &LevelField, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, level: lf.level(), entries: vec![lf.zero(); rows * cols] }
    }

    pub fn identity(lf: &LevelField, n: usize) -> Self {
        let mut m = Self::zeros(lf, n, n);
        for i in 0..n {
            m.entries[i * n + i] = lf.one();
        }
        m
    }

    pub fn from_rows(level: usize, rows: Vec<Vec<TowerElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix { rows: r, cols: c, level, entries: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &TowerElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TowerElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[TowerElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<TowerElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<TowerElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, lf: &LevelField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not match");
        let mut out = Matrix::zeros(lf, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if lf.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = lf.mul(a, other.get(k, j));
                    let idx = i * other.cols + j;
                    out.entries[idx] = lf.add(&out.entries[idx], &t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, lf: &LevelField, v: &[TowerElem]) -> Vec<TowerElem> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(lf.zero(), |acc, (a, b)| lf.add(&acc, &lf.mul(a, b)))
            })
            .collect()
    }

    pub fn sub(&self, lf: &LevelField, other: &Matrix) -> Matrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| lf.sub(a, b)).collect();
        Matrix { entries, ..self.clone() }
    }

    pub fn is_identity(&self, lf: &LevelField) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        lf.is_one(v)
                    } else {
                        lf.is_zero(v)
                    }
                })
            })
    }

    /// Entrywise `sigma^d`.
    pub fn frobenius(&self, tower: &FieldTower, d: i64) -> Matrix {
        let entries = self.entries.iter().map(|x| tower.frobenius(x, d)).collect();
        Matrix { entries, ..self.clone() }
    }

    /// Entrywise embedding into level `t`.
    pub fn embed(&self, tower: &FieldTower, t: usize) -> Result<Matrix, FieldError> {
        let entries = self
            .entries
            .iter()
            .map(|x| tower.embed(x, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, level: t, entries })
    }

    pub fn rank(&self, lf: &LevelField) -> usize {
        let mut rows = self.to_rows();
        row_reduce(lf, &mut rows).len()
    }

    pub fn determinant(&self, lf: &LevelField) -> TowerElem {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = lf.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !lf.is_zero(&a[r][c])) else {
                return lf.zero();
            };
            if p != c {
                a.swap(p, c);
                det = lf.neg(&det);
            }
            det = lf.mul(&det, &a[c][c]);
            let inv = lf.inv(&a[c][c]).unwrap();
            for r in c + 1..n {
                if lf.is_zero(&a[r][c]) {
                    continue;
                }
                let f = lf.mul(&a[r][c], &inv);
                for j in c..n {
                    let t = lf.mul(&f, &a[c][j]);
                    a[r][j] = lf.sub(&a[r][j], &t);
                }
            }
        }
        det
    }

    pub fn inverse(&self, lf: &LevelField) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<TowerElem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { lf.one() } else { lf.zero() }));
                r
            })
            .collect();
        let pivots = row_reduce(lf, &mut a);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = a.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.level, rows))
    }
}

/// Reduced row echelon form over a level field; returns the pivot columns.
pub fn row_reduce(lf: &LevelField, m: &mut [Vec<TowerElem>]) -> Vec<usize> {
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
        let Some(pr) = (r..rows).find(|&i| !lf.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = lf.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = lf.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !lf.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = lf.mul(&factor, &m[r][j]);
                    m[i][j] = lf.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
