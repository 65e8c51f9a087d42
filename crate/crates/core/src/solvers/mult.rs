//! Multiplicative systems `x^{beta_i} = a_i` over `G_m^r`, solved in `k^[n]`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Attempt, Exhausted, Found, SolveError, SolveOutcome, Witness};
use crate::ffield::kn::{base_embed, kn_mul, kn_one, kn_pow, kn_sigma};
use crate::ffield::{FieldError, FieldTower, FiniteField, KnElem, LevelField, TowerElem};
use crate::smith::smith_normal_form;
use crate::zsig::SigmaPoly;
use crate::zsig_module::{finite_order, ZSigmaModule};

/// Rows `beta_i` (one `SigmaPoly` per unknown) with constants `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTorsor {
    pub exponents: Vec<Vec<SigmaPoly>>,
    pub constants: Vec<TowerElem>,
}

impl MultTorsor {
    pub fn new(
        tower: &FieldTower,
        exponents: Vec<Vec<SigmaPoly>>,
        constants: Vec<TowerElem>,
    ) -> Result<Self, SolveError> {
        if exponents.is_empty() {
            return Err(SolveError::Invalid("at least one row is needed".into()));
        }
        if exponents.len() != constants.len() {
            return Err(SolveError::Invalid(format!(
                "{} rows but {} constants",
                exponents.len(),
                constants.len()
            )));
        }
        let r = exponents[0].len();
        if r == 0 || exponents.iter().any(|row| row.len() != r) {
            return Err(SolveError::Invalid("rows must have the same positive length".into()));
        }
        for (i, a) in constants.iter().enumerate() {
            if tower.level(a.level)?.is_zero(a) {
                return Err(SolveError::Invalid(format!("constant {i} is zero")));
            }
        }
        Ok(MultTorsor { exponents, constants })
    }

    pub fn unknowns(&self) -> usize {
        self.exponents[0].len()
    }

    /// The character module `Z[s]^r / (rows)` of the group acting on the torsor.
    pub fn module(&self) -> ZSigmaModule {
        ZSigmaModule::general(self.unknowns(), self.exponents.clone())
            .expect("rows were validated")
    }
}

/// The system over `(k, sigma^n)` in unknowns `z_{v,j}` (index `v*r + j`, standing for the
/// last component of `sigma^v(x_j)`): each row shifted by `sigma^t`, `t < n`, with
/// `sigma^{un+v}` on unknown `j` rewritten as `tau^u` on `z_{v,j}`.
pub fn unfold_mult_system(tower: &FieldTower, sys: &MultTorsor, n: usize) -> MultTorsor {
    assert!(n >= 1, "unfolding needs n >= 1");
    let r = sys.unknowns();
    let mut exponents = Vec::new();
    let mut constants = Vec::new();
    for (row, a) in sys.exponents.iter().zip(&sys.constants) {
        for t in 0..n {
            let mut coeffs: Vec<Vec<BigInt>> = vec![Vec::new(); n * r];
            for (j, f) in row.iter().enumerate() {
                for (i, c) in f.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let e = i + t;
                    let slot = &mut coeffs[(e % n) * r + j];
                    if slot.len() <= e / n {
                        slot.resize(e / n + 1, BigInt::zero());
                    }
                    slot[e / n] += c;
                }
            }
            exponents.push(coeffs.into_iter().map(SigmaPoly::new).collect());
            constants.push(tower.frobenius(a, t as i64));
        }
    }
    MultTorsor { exponents, constants }
}

fn pow_int(lf: &LevelField, a: &TowerElem, k: &BigInt, order: &BigUint) -> TowerElem {
    let e = k.mod_floor(&BigInt::from(order.clone())).to_biguint().expect("nonnegative");
    lf.pow(a, &e)
}

fn lift_all(tower: &FieldTower, xs: &[TowerElem], t: usize) -> Result<Vec<TowerElem>, FieldError> {
    xs.iter().map(|x| tower.embed(x, t)).collect()
}

/// Substitutes `x` into every row through the twist of `k^[n]`.
pub fn verify_mult_witness(tower: &FieldTower, sys: &MultTorsor, x: &[KnElem]) -> Result<bool, SolveError> {
    if x.len() != sys.unknowns() {
        return Ok(false);
    }
    let n = x[0].n();
    let level = sys.constants.iter().fold(x[0].level(), |acc, a| acc.lcm(&a.level));
    let lf = tower.level(level)?;
    let x: Vec<KnElem> = x
        .iter()
        .map(|xi| crate::ffield::kn::kn_to_level(tower, xi, level))
        .collect::<Result<_, _>>()?;
    for (row, a) in sys.exponents.iter().zip(&sys.constants) {
        let mut acc = kn_one(&lf, n);
        for (xj, f) in x.iter().zip(row) {
            let mut shifted = xj.clone();
            for (i, c) in f.coeffs().iter().enumerate() {
                if i > 0 {
                    shifted = kn_sigma(tower, &shifted, 1);
                }
                if c.is_zero() {
                    continue;
                }
                match kn_pow(&lf, &shifted, c) {
                    Some(p) => acc = kn_mul(&lf, &acc, &p),
                    None => return Ok(false),
                }
            }
        }
        if acc != base_embed(tower, &tower.embed(a, level)?, n, 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

enum Step {
    Solved(Found),
    Failed(String),
}

fn solve_at_n(tower: &FieldTower, sys: &MultTorsor, n: usize) -> Result<Step, SolveError> {
    let r = sys.unknowns();
    let unfolded = unfold_mult_system(tower, sys, n);
    let qn = BigInt::from(tower.q().pow(n as u32));
    let e: Vec<Vec<BigInt>> = unfolded
        .exponents
        .iter()
        .map(|row| row.iter().map(|f| f.eval_int(&qn)).collect())
        .collect();
    let cols = n * r;
    let snf = smith_normal_form(&e, cols);
    let diag = snf.diagonal();

    let t0 = unfolded.constants.iter().fold(1usize, |acc, a| acc.lcm(&a.level));
    let l0 = tower.level(t0)?;
    let n0 = l0.unit_order();
    let b = lift_all(tower, &unfolded.constants, t0)?;
    // c = U b, multiplicatively
    let c: Vec<TowerElem> = snf
        .u
        .iter()
        .map(|urow| {
            urow.iter()
                .zip(&b)
                .fold(l0.one(), |acc, (k, bj)| l0.mul(&acc, &pow_int(&l0, bj, k, &n0)))
        })
        .collect();
    for (i, ci) in c.iter().enumerate().skip(snf.rank) {
        if !l0.is_one(ci) {
            return Ok(Step::Failed(format!("inconsistent: transformed row {i} has constant != 1")));
        }
    }

    let cap = tower.caps().max_level;
    let mut level = t0;
    let found_level = loop {
        if level > cap {
            return Ok(Step::Failed(format!("no level up to {cap} contains the roots")));
        }
        let nl = tower.unit_order(level);
        let ok = diag.iter().zip(&c).all(|(di, ci)| {
            let h = di.magnitude().gcd(&nl);
            let k = (&nl / &h) % &n0;
            l0.is_one(&l0.pow(ci, &k))
        });
        if ok {
            break level;
        }
        level += t0;
    };

    let lf = tower.level(found_level)?;
    let nl = lf.unit_order();
    if nl.to_u64().is_none_or(|v| v > tower.caps().dlog_cap) {
        return Ok(Step::Failed(format!(
            "roots lie at level {found_level}, whose unit group exceeds the dlog cap {}",
            tower.caps().dlog_cap
        )));
    }
    let g = lf.least_generator();
    let mut w = vec![lf.one(); cols];
    for (i, (di, ci)) in diag.iter().zip(&c).enumerate() {
        let gamma = tower.dlog(&tower.embed(ci, found_level)?)?;
        let h = di.magnitude().gcd(&nl);
        let modulus = &nl / &h;
        let dh = BigInt::from(di.magnitude() / &h);
        let inv = dh
            .extended_gcd(&BigInt::from(modulus.clone()))
            .x
            .mod_floor(&BigInt::from(modulus.clone()));
        let k = (BigInt::from(&gamma / &h) * inv).mod_floor(&BigInt::from(modulus));
        w[i] = lf.pow(&g, &k.to_biguint().expect("nonnegative"));
    }
    // z = V w
    let z: Vec<TowerElem> = snf
        .v
        .iter()
        .map(|vrow| {
            vrow.iter()
                .zip(&w)
                .fold(lf.one(), |acc, (k, wi)| lf.mul(&acc, &pow_int(&lf, wi, k, &nl)))
        })
        .collect();
    let b_l = lift_all(tower, &unfolded.constants, found_level)?;
    for (row, bi) in e.iter().zip(&b_l) {
        let lhs = row.iter().zip(&z).fold(lf.one(), |acc, (k, zk)| lf.mul(&acc, &pow_int(&lf, zk, k, &nl)));
        if lhs != *bi {
            return Err(SolveError::Verification("unfolded system not satisfied".into()));
        }
    }
    let xs: Vec<KnElem> = (0..r)
        .map(|j| KnElem { components: (0..n).rev().map(|v| z[v * r + j].clone()).collect() })
        .collect();
    if !verify_mult_witness(tower, sys, &xs)? {
        return Err(SolveError::Verification("witness does not satisfy the system in k^[n]".into()));
    }
    Ok(Step::Solved(Found { n, level: found_level, witness: Witness::Units(xs) }))
}

/// Searches `n = 1, ..., max_n` for a point of the torsor in `k^[n]`.
pub fn mult_solve(tower: &FieldTower, sys: &MultTorsor, max_n: usize) -> Result<SolveOutcome, SolveError> {
    let mut attempts = Vec::new();
    for n in 1..=max_n {
        match solve_at_n(tower, sys, n)? {
            Step::Solved(f) => return Ok(SolveOutcome::Found(f)),
            Step::Failed(reason) => attempts.push(Attempt { n, reason }),
        }
    }
    Ok(SolveOutcome::Exhausted(Exhausted {
        tried_n: max_n,
        max_level: tower.caps().max_level,
        attempts,
    }))
}

/// `max(8, lcm(1..=|M|))` when the character module `M` is a finite group, else `8`.
pub fn default_max_n(sys: &MultTorsor) -> usize {
    const FLOOR: usize = 8;
    let Some(order) = finite_order(&sys.module()) else {
        return FLOOR;
    };
    let Some(m) = order.to_usize() else {
        return usize::MAX;
    };
    let mut l = BigUint::one();
    for k in 1..=m {
        l = l.lcm(&BigUint::from(k));
        if l > BigUint::from(usize::MAX) {
            return usize::MAX;
        }
    }
    FLOOR.max(l.to_usize().unwrap_or(usize::MAX))
}

/// `mult_solve` with the default bound on `n` unless one is given.
pub fn torsor_search(
    tower: &FieldTower,
    sys: &MultTorsor,
    max_n: Option<usize>,
) -> Result<SolveOutcome, SolveError> {
    let max_n = max_n.unwrap_or_else(|| default_max_n(sys));
    mult_solve(tower, sys, max_n)
}
