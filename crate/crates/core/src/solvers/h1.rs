//! Classes of one-relator torsors `x^alpha = a` over a fixed level.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::SolveError;
use crate::ffield::{FieldTower, FiniteField, TowerElem};
use crate::zsig::SigmaPoly;

/// `|w|` with every factor `p` removed; `0` stays `0`.
fn strip_p(w: &BigInt, p: u64) -> BigUint {
    let mut w = w.magnitude().clone();
    if w.is_zero() {
        return w;
    }
    let p = BigUint::from(p);
    while (&w % &p).is_zero() {
        w /= &p;
    }
    w
}

/// The representative `g^(dlog(a) mod h)` of `a` modulo the subgroup
/// `{c^{alpha(q)} : c in level t}`, where `h = gcd(alpha(q)', q^t - 1)` with the `p`-part
/// of `alpha(q)` removed and `g` the least generator of the level.
pub fn h1_canonical(tower: &FieldTower, alpha: &SigmaPoly, a: &TowerElem) -> Result<TowerElem, SolveError> {
    let lf = tower.level(a.level)?;
    if lf.is_zero(a) {
        return Err(SolveError::Invalid("the constant must be nonzero".into()));
    }
    let w = strip_p(&alpha.eval_int(&BigInt::from(tower.q())), tower.p());
    let order = lf.unit_order();
    let h = w.gcd(&order);
    let k = tower.dlog(a)? % &h;
    Ok(lf.pow(&lf.least_generator(), &k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_over_f5() {
        let tw = FieldTower::new(5, 1).unwrap();
        let sp = |s: &str| s.parse::<SigmaPoly>().unwrap();
        let one = tw.from_int(1, 1).unwrap();
        for alpha in ["s-1", "2", "s^2+3", "5*s"] {
            assert_eq!(h1_canonical(&tw, &sp(alpha), &one).unwrap(), one);
        }
        for a in 1..5 {
            let x = tw.from_int(a, 1).unwrap();
            assert_eq!(h1_canonical(&tw, &sp("s-1"), &x).unwrap(), x);
        }
        let rep = h1_canonical(&tw, &sp("2"), &tw.from_int(3, 1).unwrap()).unwrap();
        assert_eq!(rep, tw.from_int(2, 1).unwrap());
        assert_eq!(h1_canonical(&tw, &sp("2"), &tw.from_int(4, 1).unwrap()).unwrap(), one);
    }
}
