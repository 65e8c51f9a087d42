//! Additive torsors `sigma^m(x) + lambda_{m-1} sigma^{m-1}(x) + ... + lambda_0 x = a`.

use num_integer::Integer;

use super::linear::lang_kernel;
use super::{Found, SolveError, Witness};
use crate::ffield::{FieldError, FieldTower, FiniteField, Matrix, TowerElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveEq {
    pub lambdas: Vec<TowerElem>,
    pub rhs: TowerElem,
}

impl AdditiveEq {
    pub fn new(tower: &FieldTower, lambdas: Vec<TowerElem>, rhs: TowerElem) -> Result<Self, SolveError> {
        let Some(l0) = lambdas.first() else {
            return Err(SolveError::Invalid("the operator needs order at least 1".into()));
        };
        if tower.level(l0.level)?.is_zero(l0) {
            return Err(SolveError::Invalid("lambda_0 must be nonzero".into()));
        }
        Ok(AdditiveEq { lambdas, rhs })
    }

    pub fn order(&self) -> usize {
        self.lambdas.len()
    }

    /// Smallest level holding all coefficients.
    pub fn base_level(&self) -> usize {
        self.lambdas.iter().fold(self.rhs.level, |acc, l| acc.lcm(&l.level))
    }

    /// `L(x)` at the level of `x`, which must be a multiple of the base level.
    pub fn apply(&self, tower: &FieldTower, x: &TowerElem) -> Result<TowerElem, FieldError> {
        let lf = tower.level(x.level)?;
        let mut acc = tower.frobenius(x, self.order() as i64);
        for (i, l) in self.lambdas.iter().enumerate() {
            let term = lf.mul(&tower.embed(l, x.level)?, &tower.frobenius(x, i as i64));
            acc = lf.add(&acc, &term);
        }
        Ok(acc)
    }

    /// The `(m+1) x (m+1)` matrix with shifts above, `-lambda_i` and `a` in row `m-1`, and
    /// `e_m` as last row.
    pub fn companion(&self, tower: &FieldTower) -> Result<Matrix, FieldError> {
        let t = self.base_level();
        let lf = tower.level(t)?;
        let m = self.order();
        let mut c = Matrix::zeros(&lf, m + 1, m + 1);
        for i in 0..m - 1 {
            c.set(i, i + 1, lf.one());
        }
        for (i, l) in self.lambdas.iter().enumerate() {
            c.set(m - 1, i, lf.neg(&tower.embed(l, t)?));
        }
        c.set(m - 1, m, tower.embed(&self.rhs, t)?);
        c.set(m, m, lf.one());
        Ok(c)
    }
}

/// Solves `L(x) = a` through the Lang map of the companion matrix: at each level the
/// solution space of `sigma(y) = C y` is computed, a solution with last entry nonzero is
/// scaled to last entry `1` (that entry is fixed by `sigma`), and `x = y_0`.
pub fn solve_additive(tower: &FieldTower, eq: &AdditiveEq) -> Result<Found, SolveError> {
    let c = eq.companion(tower)?;
    let t = c.level;
    let m = eq.order();
    let cap = tower.caps().max_level;
    let mut level = t;
    while level <= cap {
        let lf = tower.level(level)?;
        let kernel = lang_kernel(tower, &c, 1, level)?;
        if let Some(y) = kernel.into_iter().find(|y| !lf.is_zero(&y[m])) {
            let scale = lf.inv(&y[m]).expect("nonzero");
            let x = lf.mul(&y[0], &scale);
            if eq.apply(tower, &x)? != tower.embed(&eq.rhs, level)? {
                return Err(SolveError::Verification("L(x) differs from the right-hand side".into()));
            }
            return Ok(Found { n: 1, level, witness: Witness::Elem(x) });
        }
        level += t;
    }
    Err(FieldError::CapExceeded { requested: level, cap }.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(tw: &FieldTower, lambdas: &[i64], a: i64) -> AdditiveEq {
        AdditiveEq::new(
            tw,
            lambdas.iter().map(|&l| tw.from_int(l, 1).unwrap()).collect(),
            tw.from_int(a, 1).unwrap(),
        )
        .unwrap()
    }

    fn elem(f: &Found) -> &TowerElem {
        match &f.witness {
            Witness::Elem(x) => x,
            _ => panic!("expected an element"),
        }
    }

    #[test]
    fn examples_over_f5() {
        let tw = FieldTower::new(5, 1).unwrap();
        let f = solve_additive(&tw, &eq(&tw, &[-2], 0)).unwrap();
        assert_eq!(elem(&f), &tw.from_int(0, 1).unwrap());
        let f = solve_additive(&tw, &eq(&tw, &[-2], 1)).unwrap();
        assert_eq!(elem(&f), &tw.from_int(4, 1).unwrap());
        let f = solve_additive(&tw, &eq(&tw, &[-1], 1)).unwrap();
        assert_eq!(f.level, 5);
        let e = eq(&tw, &[-1], 1);
        assert_eq!(e.apply(&tw, elem(&f)).unwrap(), tw.from_int(1, 5).unwrap());
    }

    #[test]
    fn zero_lambda_rejected() {
        let tw = FieldTower::new(5, 1).unwrap();
        let r = AdditiveEq::new(&tw, vec![tw.from_int(0, 1).unwrap()], tw.from_int(1, 1).unwrap());
        assert!(r.is_err());
    }
}
