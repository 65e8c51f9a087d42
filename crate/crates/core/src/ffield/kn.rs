//! The difference ring `k^[n]`: `n`-tuples over the tower with the cyclic twist
//! `(a_1, ..., a_n) -> (tau^n(a_n), a_1, ..., a_{n-1})`, where `tau = sigma^s` is the base
//! operator.

use num_bigint::BigInt;
use num_traits::Signed;

use super::field::FiniteField;
use super::matrix::Matrix;
use super::tower::{FieldError, FieldTower, LevelField, TowerElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnElem {
    /// Components `a_1, ..., a_n`, all at the same level.
    pub components: Vec<TowerElem>,
}

impl KnElem {
    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn level(&self) -> usize {
        self.components.first().map_or(1, |c| c.level)
    }
}

pub fn kn_one(lf: &LevelField, n: usize) -> KnElem {
    KnElem { components: vec![lf.one(); n] }
}

pub fn kn_mul(lf: &LevelField, x: &KnElem, y: &KnElem) -> KnElem {
    let components = x.components.iter().zip(&y.components).map(|(a, b)| lf.mul(a, b)).collect();
    KnElem { components }
}

/// `x^k` for an integer `k`; `None` if `k < 0` and some component vanishes.
pub fn kn_pow(lf: &LevelField, x: &KnElem, k: &BigInt) -> Option<KnElem> {
    let mut components = Vec::with_capacity(x.n());
    for a in &x.components {
        let base = if k.is_negative() { lf.inv(a)? } else { a.clone() };
        components.push(lf.pow(&base, k.magnitude()));
    }
    Some(KnElem { components })
}

/// The twist of `k^[n]` for base operator `sigma^s`.
pub fn kn_sigma(tower: &FieldTower, x: &KnElem, s: i64) -> KnElem {
    let n = x.n();
    let mut out = Vec::with_capacity(n);
    out.push(tower.frobenius(&x.components[n - 1], s * n as i64));
    out.extend(x.components[..n - 1].iter().cloned());
    KnElem { components: out }
}

/// The diagonal difference embedding `k -> k^[n]`: `a -> (tau^{n-1} a, ..., tau a, a)`.
pub fn base_embed(tower: &FieldTower, a: &TowerElem, n: usize, s: i64) -> KnElem {
    let components = (0..n).map(|i| tower.frobenius(a, s * (n - 1 - i) as i64)).collect();
    KnElem { components }
}

/// The difference embedding `k^[n] -> k^[nl]`: block `u` (counted from the right, starting
/// at zero) holds `tau^{nu}` applied to the components.
pub fn kn_embed(tower: &FieldTower, x: &KnElem, l: usize, s: i64) -> KnElem {
    let n = x.n() as i64;
    let mut components = Vec::with_capacity(x.n() * l);
    for u in (0..l).rev() {
        components.extend(x.components.iter().map(|a| tower.frobenius(a, s * n * u as i64)));
    }
    KnElem { components }
}

/// The last component `a_n`.
pub fn project_last(x: &KnElem) -> TowerElem {
    x.components.last().cloned().expect("k^[n] has n >= 1 components")
}

/// Moves all components to level `t`.
pub fn kn_to_level(tower: &FieldTower, x: &KnElem, t: usize) -> Result<KnElem, FieldError> {
    let components = x
        .components
        .iter()
        .map(|c| tower.embed(c, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KnElem { components })
}

/// A matrix over `k^[n]`, stored as its `n` component matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnMatrix {
    pub components: Vec<Matrix>,
}

pub fn kn_sigma_matrix(tower: &FieldTower, m: &KnMatrix, s: i64) -> KnMatrix {
    let n = m.components.len();
    let mut out = Vec::with_capacity(n);
    out.push(m.components[n - 1].frobenius(tower, s * n as i64));
    out.extend(m.components[..n - 1].iter().cloned());
    KnMatrix { components: out }
}

pub fn base_embed_matrix(tower: &FieldTower, a: &Matrix, n: usize, s: i64) -> KnMatrix {
    let components = (0..n).map(|i| a.frobenius(tower, s * (n - 1 - i) as i64)).collect();
    KnMatrix { components }
}
