//! Finitely presented `Z[s]`-modules `M = Z[s]^g / (relations)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smith::{hermite_rows, smith_normal_form, Mat};
use crate::zsig::{gcd_q, QPoly, SigmaPoly, ZsigError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("unsupported module shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("all ideal generators are zero")]
    AllZero,
    #[error("integer lattice did not stabilize up to degree {cap}; last invariants {last}")]
    LatticeCapExceeded { cap: usize, last: String },
    #[error(transparent)]
    Poly(#[from] ZsigError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    General,
    /// One generator; the relations are the ideal generators.
    Cyclic,
    /// One cyclic summand per generator, with its ideal generators.
    Sum(Vec<Vec<SigmaPoly>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSigmaModule {
    num_generators: usize,
    relations: Vec<Vec<SigmaPoly>>,
    shape: Shape,
}

/// Rank over `Z`: a count or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankZ {
    Finite(u64),
    Infinity,
}

impl fmt::Display for RankZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankZ::Finite(n) => write!(f, "{n}"),
            RankZ::Infinity => write!(f, "Infinity"),
        }
    }
}

impl Serialize for RankZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RankZ::Finite(n) => s.serialize_u64(*n),
            RankZ::Infinity => s.serialize_str("Infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullResult {
    OneRelator(SigmaPoly),
    OrderZero,
}

impl Serialize for HullResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            HullResult::OneRelator(a) => {
                let mut st = s.serialize_struct("HullResult", 2)?;
                st.serialize_field("kind", "one_relator")?;
                st.serialize_field("alpha", a)?;
                st.end()
            }
            HullResult::OrderZero => {
                let mut st = s.serialize_struct("HullResult", 1)?;
                st.serialize_field("kind", "order_zero")?;
                st.end()
            }
        }
    }
}

/// The JSON presentation `{"generators": g, "relations": [[..]], "shape": ".."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub generators: usize,
    pub relations: Vec<Vec<String>>,
    #[serde(default = "default_shape")]
    pub shape: String,
}

fn default_shape() -> String {
    "general".into()
}

impl ZSigmaModule {
    /// A presentation with no shape information.
    pub fn general(
        num_generators: usize,
        relations: Vec<Vec<SigmaPoly>>,
    ) -> Result<Self, ModuleError> {
        if num_generators == 0 {
            return Err(ModuleError::InvalidPresentation("at least one generator is needed".into()));
        }
        for (i, row) in relations.iter().enumerate() {
            if row.len() != num_generators {
                return Err(ModuleError::InvalidPresentation(format!(
                    "relation {i} has {} entries, expected {num_generators}",
                    row.len()
                )));
            }
        }
        Ok(ZSigmaModule { num_generators, relations, shape: Shape::General })
    }

    pub fn free(g: usize) -> Result<Self, ModuleError> {
        Self::general(g, Vec::new())
    }

    /// `Z[s]/I` for the ideal generated by `ideal`.
    pub fn cyclic(ideal: Vec<SigmaPoly>) -> Self {
        let relations = ideal.into_iter().map(|f| vec![f]).collect();
        ZSigmaModule { num_generators: 1, relations, shape: Shape::Cyclic }
    }

    /// `Z[s]/(alpha)`.
    pub fn one_relator(alpha: SigmaPoly) -> Self {
        Self::cyclic(vec![alpha])
    }

    /// The direct sum of `Z[s]/I_k`.
    pub fn direct_sum(ideals: Vec<Vec<SigmaPoly>>) -> Result<Self, ModuleError> {
        let g = ideals.len();
        if g == 0 {
            return Err(ModuleError::InvalidPresentation("empty direct sum".into()));
        }
        let mut relations = Vec::new();
        for (k, ideal) in ideals.iter().enumerate() {
            for f in ideal {
                let mut row = vec![SigmaPoly::zero(); g];
                row[k] = f.clone();
                relations.push(row);
            }
        }
        Ok(ZSigmaModule { num_generators: g, relations, shape: Shape::Sum(ideals) })
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &[Vec<SigmaPoly>] {
        &self.relations
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// For a cyclic module with a single nonzero relator, that relator.
    pub fn principal_relator(&self) -> Option<&SigmaPoly> {
        if self.shape != Shape::Cyclic {
            return None;
        }
        let nonzero: Vec<&SigmaPoly> =
            self.relations.iter().map(|r| &r[0]).filter(|f| !f.is_zero()).collect();
        match nonzero.as_slice() {
            [a] => Some(a),
            _ => None,
        }
    }

    pub fn ideal(&self) -> Option<Vec<SigmaPoly>> {
        match self.shape {
            Shape::Cyclic => Some(self.relations.iter().map(|r| r[0].clone()).collect()),
            _ => None,
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<Self, ModuleError> {
        let rows: Vec<Vec<SigmaPoly>> = j
            .relations
            .iter()
            .map(|row| row.iter().map(|e| e.parse::<SigmaPoly>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let m = Self::general(j.generators, rows)?;
        match j.shape.as_str() {
            "general" => Ok(m),
            "cyclic" => {
                if j.generators != 1 {
                    return Err(ModuleError::InvalidPresentation(
                        "a cyclic presentation has exactly one generator".into(),
                    ));
                }
                Ok(Self::cyclic(m.relations.into_iter().map(|mut r| r.remove(0)).collect()))
            }
            "sum" => {
                let mut ideals = vec![Vec::new(); j.generators];
                for (i, row) in m.relations.iter().enumerate() {
                    let support: Vec<usize> = (0..row.len()).filter(|&k| !row[k].is_zero()).collect();
                    match support.as_slice() {
                        [] => {}
                        [k] => ideals[*k].push(row[*k].clone()),
                        _ => {
                            return Err(ModuleError::InvalidPresentation(format!(
                                "relation {i} couples several summands"
                            )))
                        }
                    }
                }
                Self::direct_sum(ideals)
            }
            other => Err(ModuleError::InvalidPresentation(format!("unknown shape {other:?}"))),
        }
    }

    pub fn to_json(&self) -> ModuleJson {
        let shape = match self.shape {
            Shape::General => "general",
            Shape::Cyclic => "cyclic",
            Shape::Sum(_) => "sum",
        };
        ModuleJson {
            generators: self.num_generators,
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|f| f.to_string()).collect())
                .collect(),
            shape: shape.into(),
        }
    }

    fn nonzero_relations(&self) -> Vec<&Vec<SigmaPoly>> {
        self.relations.iter().filter(|r| r.iter().any(|f| !f.is_zero())).collect()
    }
}

/// Rank of the relation matrix over the fraction field `Q(s)`, by fraction-free elimination.
pub fn relation_rank(m: &ZSigmaModule) -> usize {
    let g = m.num_generators;
    let mut rows: Vec<Vec<SigmaPoly>> = m.nonzero_relations().into_iter().cloned().collect();
    let mut rank = 0;
    for c in 0..g {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let piv = pivot_row[c].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let a = row[c].clone();
            for k in 0..g {
                row[k] = row[k].mul(&piv).sub(&pivot_row[k].mul(&a));
            }
            // keep entries small: divide out the common integer content
            let mut content = BigInt::zero();
            for f in row.iter() {
                for x in f.coeffs() {
                    content = num_integer::Integer::gcd(&content, x);
                }
            }
            if content > BigInt::one() {
                for f in row.iter_mut() {
                    *f = SigmaPoly::new(f.coeffs().iter().map(|x| x / &content).collect());
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `g - rank` of the relation matrix over `Q(s)`.
pub fn rank_zsigma(m: &ZSigmaModule) -> usize {
    m.num_generators - relation_rank(m)
}

/// Invariant factors of `M (x) Q` over `Q[s]` (nonzero diagonal of the Smith form) and the
/// free rank.
pub fn rational_invariants(m: &ZSigmaModule) -> (Vec<QPoly>, usize) {
    let g = m.num_generators;
    let rows: Mat<QPoly> = m
        .nonzero_relations()
        .into_iter()
        .map(|r| r.iter().map(|f| f.to_qpoly()).collect())
        .collect();
    if rows.is_empty() {
        return (Vec::new(), g);
    }
    let s = smith_normal_form(&rows, g);
    (s.diagonal(), g - s.rank)
}

/// `dim_Q(M (x) Q)`.
pub fn rank_z(m: &ZSigmaModule) -> RankZ {
    let (diag, free) = rational_invariants(m);
    if free > 0 {
        return RankZ::Infinity;
    }
    RankZ::Finite(diag.iter().map(|d| d.degree().unwrap_or(0) as u64).sum())
}

/// The finitely generated abelian group reached by the stabilized lattice construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSummary {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub degree: usize,
}

fn row_degree(row: &[SigmaPoly]) -> usize {
    row.iter().filter_map(|f| f.degree()).max().unwrap_or(0)
}

/// Approximates the subgroup of `M` spanned by `s^j e_k` with `j <= D` as
/// `Z^{g(D+1)} / L_D`, where `L_D` is the part of the span of all shifted relations of
/// degree at most `D + slack` that lies in degrees `<= D`. `D` grows until the free rank and
/// invariant factors are unchanged for two consecutive steps.
pub fn stabilized_lattice(m: &ZSigmaModule) -> Result<LatticeSummary, ModuleError> {
    let g = m.num_generators;
    let rels = m.nonzero_relations();
    let slack: usize = rels.iter().map(|r| row_degree(r)).sum();
    let cap = 4 * (g + slack);
    let start = rels.iter().map(|r| row_degree(r)).max().unwrap_or(0);
    let mut history: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for d in start..=cap.max(start + 2) {
        let top = d + slack;
        let ncols = g * (top + 1);
        let col = |j: usize, k: usize| (top - j) * g + k;
        let mut rows: Mat<BigInt> = Vec::new();
        for r in &rels {
            let rd = row_degree(r);
            for t in 0..=top.saturating_sub(rd) {
                let mut v = vec![BigInt::zero(); ncols];
                for (k, f) in r.iter().enumerate() {
                    for (j, c) in f.coeffs().iter().enumerate() {
                        if !c.is_zero() {
                            v[col(j + t, k)] = c.clone();
                        }
                    }
                }
                rows.push(v);
            }
        }
        let h = hermite_rows(&rows, ncols);
        let low_start = (top - d) * g;
        let low: Mat<BigInt> = h
            .into_iter()
            .filter(|r| r.iter().position(|x| !x.is_zero()).is_some_and(|p| p >= low_start))
            .map(|r| r[low_start..].to_vec())
            .collect();
        let width = g * (d + 1);
        let (rank, torsion) = if low.is_empty() {
            (0, Vec::new())
        } else {
            let s = smith_normal_form(&low, width);
            let t: Vec<BigInt> = s.diagonal().into_iter().filter(|x| x.abs() > BigInt::one()).collect();
            (s.rank, t)
        };
        history.push((width - rank, torsion));
        let n = history.len();
        if n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3] {
            let (free_rank, torsion) = history.pop().unwrap();
            return Ok(LatticeSummary { free_rank, torsion, degree: d });
        }
    }
    let last = history
        .last()
        .map(|(r, t)| {
            let ts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            format!("free rank {r}, torsion [{}]", ts.join(", "))
        })
        .unwrap_or_default();
    Err(ModuleError::LatticeCapExceeded { cap, last })
}

/// Whether some nonzero element of `M` is killed by an integer `N >= 2`.
pub fn has_z_torsion(m: &ZSigmaModule) -> Result<bool, ModuleError> {
    if m.nonzero_relations().is_empty() {
        return Ok(false);
    }
    match &m.shape {
        Shape::Cyclic => {
            if let Some(alpha) = m.principal_relator() {
                return Ok(alpha.content() > BigInt::one());
            }
            Ok(!stabilized_lattice(m)?.torsion.is_empty())
        }
        Shape::Sum(ideals) => {
            for ideal in ideals {
                if has_z_torsion(&ZSigmaModule::cyclic(ideal.clone()))? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Shape::General => {
            if rank_zsigma(m) != 0 {
                return Err(ModuleError::UnsupportedShape(
                    "torsion of a general presentation of positive rank over Z[s] is not decided"
                        .into(),
                ));
            }
            Ok(!stabilized_lattice(m)?.torsion.is_empty())
        }
    }
}

/// `|M|` when `M` is a finite group, from the stabilized lattice.
pub fn finite_order(m: &ZSigmaModule) -> Option<BigUint> {
    if rank_z(m) != RankZ::Finite(0) {
        return None;
    }
    let lat = stabilized_lattice(m).ok()?;
    if lat.free_rank != 0 {
        return None;
    }
    Some(lat.torsion.iter().fold(BigUint::one(), |acc, x| acc * x.magnitude()))
}

/// The presentation of `M` over `Z[t]`, `t = s^n`, on generators `z_{v,k}` (index
/// `v*g + k`) standing for `s^v e_k`.
pub fn restrict_scalars(m: &ZSigmaModule, n: usize) -> ZSigmaModule {
    assert!(n >= 1, "restriction needs n >= 1");
    let g = m.num_generators;
    let ng = n * g;
    let mut rows: Vec<Vec<SigmaPoly>> = Vec::new();
    for rho in m.nonzero_relations() {
        for t in 0..n {
            let mut coeffs: Vec<Vec<BigInt>> = vec![Vec::new(); ng];
            for (k, f) in rho.iter().enumerate() {
                for (i, c) in f.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let e = i + t;
                    let (u, v) = (e / n, e % n);
                    let slot = &mut coeffs[v * g + k];
                    if slot.len() <= u {
                        slot.resize(u + 1, BigInt::zero());
                    }
                    slot[u] += c;
                }
            }
            rows.push(coeffs.into_iter().map(SigmaPoly::new).collect());
        }
    }
    simplify(ng, rows)
}

/// Eliminates generators that some relation expresses with a `+-1` constant coefficient,
/// then recognizes cyclic and direct-sum shapes.
fn simplify(g: usize, mut rows: Vec<Vec<SigmaPoly>>) -> ZSigmaModule {
    let mut alive: Vec<usize> = (0..g).collect();
    loop {
        rows.retain(|r| r.iter().any(|f| !f.is_zero()));
        let mut pick = None;
        'scan: for (i, row) in rows.iter().enumerate() {
            for c in (0..row.len()).rev() {
                let f = &row[c];
                if f.degree() == Some(0) && f.coeff(0).abs().is_one() {
                    pick = Some((i, c));
                    break 'scan;
                }
            }
        }
        let Some((pi, c)) = pick else { break };
        if alive.len() == 1 {
            // the module is zero; keep the unit relation
            break;
        }
        let prow = rows.remove(pi);
        let unit = prow[c].coeff(0);
        for row in rows.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            // row -= (row[c] / unit) * prow, and unit^-1 = unit
            let factor = row[c].scale(&unit);
            for k in 0..row.len() {
                row[k] = row[k].sub(&factor.mul(&prow[k]));
            }
        }
        for row in rows.iter_mut() {
            row.remove(c);
        }
        alive.remove(c);
    }
    let g2 = alive.len();
    if g2 == 1 {
        return ZSigmaModule::cyclic(rows.into_iter().map(|mut r| r.remove(0)).collect());
    }
    if !rows.is_empty() && rows.iter().all(|r| r.iter().filter(|f| !f.is_zero()).count() <= 1) {
        let mut ideals = vec![Vec::new(); g2];
        for r in &rows {
            if let Some(k) = r.iter().position(|f| !f.is_zero()) {
                ideals[k].push(r[k].clone());
            }
        }
        return ZSigmaModule::direct_sum(ideals).expect("at least one summand");
    }
    ZSigmaModule::general(g2, rows).expect("rows have the right length")
}

/// The smallest principal ideal `(alpha)` of positive degree containing the ideal, or
/// `OrderZero` when the ideal meets `Z` nontrivially.
pub fn one_relator_hull(gens: &[SigmaPoly]) -> Result<HullResult, ModuleError> {
    let mut acc: Option<SigmaPoly> = None;
    for f in gens.iter().filter(|f| !f.is_zero()) {
        acc = Some(match acc {
            None => f.primitive_part()?,
            Some(a) => gcd_q(&a, f)?,
        });
    }
    let alpha = acc.ok_or(ModuleError::AllZero)?;
    if alpha.degree().unwrap_or(0) >= 1 {
        Ok(HullResult::OneRelator(alpha))
    } else {
        Ok(HullResult::OrderZero)
    }
}
