//! Diagonalizable difference groups `G = D(M)`, read off their character modules `M`.

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::zsig::{factor_z, is_irreducible, SigmaPoly, ZsigError};
use crate::zsig_module::{
    has_z_torsion, one_relator_hull, rank_z, rank_zsigma, restrict_scalars, HullResult,
    ModuleError, RankZ, Shape, ZSigmaModule,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("the group has order zero")]
    NotPositiveOrder,
    #[error("the relator must be nonzero")]
    ZeroRelator,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Poly(#[from] ZsigError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagGroup {
    pub module: ZSigmaModule,
    pub label: Option<String>,
}

/// A yes/no answer that may be out of reach for the given presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unsupported,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Answer::Yes => s.serialize_bool(true),
            Answer::No => s.serialize_bool(false),
            Answer::Unsupported => s.serialize_str("Unsupported"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub sigma_dim: usize,
    pub order: RankZ,
    pub connected: Answer,
    pub almost_simple: Answer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    AlmostSimple(SigmaPoly),
    OrderZeroPiece(BigInt),
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Factor", 2)?;
        match self {
            Factor::AlmostSimple(a) => {
                st.serialize_field("kind", "almost_simple")?;
                st.serialize_field("alpha", a)?;
            }
            Factor::OrderZeroPiece(p) => {
                st.serialize_field("kind", "order_zero")?;
                st.serialize_field("p", &p.to_string())?;
            }
        }
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSeries {
    /// Sign of the relator relative to the product of the factors.
    pub sign: i8,
    pub factors: Vec<Factor>,
}

impl FactorSeries {
    pub fn product(&self) -> SigmaPoly {
        self.factors.iter().fold(SigmaPoly::constant(BigInt::from(self.sign)), |acc, f| match f {
            Factor::AlmostSimple(a) => acc.mul(a),
            Factor::OrderZeroPiece(p) => acc.scale(p),
        })
    }

    pub fn order(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::AlmostSimple(a) => a.degree().unwrap_or(0) as u64,
                Factor::OrderZeroPiece(_) => 0,
            })
            .sum()
    }
}

impl DiagGroup {
    pub fn new(module: ZSigmaModule) -> Self {
        DiagGroup { module, label: None }
    }

    /// `{g in G_m : g^alpha = 1}`.
    pub fn one_relator(alpha: SigmaPoly) -> Result<Self, GroupError> {
        if alpha.is_zero() {
            return Err(GroupError::ZeroRelator);
        }
        Ok(DiagGroup { module: ZSigmaModule::one_relator(alpha), label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The ideal `I` when `M = Z[s]/I` on a single generator.
    fn cyclic_ideal(&self) -> Option<Vec<SigmaPoly>> {
        if self.module.num_generators() != 1 {
            if let Shape::Sum(ideals) = self.module.shape() {
                if ideals.len() == 1 {
                    return Some(ideals[0].clone());
                }
            }
            return None;
        }
        Some(self.module.relations().iter().map(|r| r[0].clone()).filter(|f| !f.is_zero()).collect())
    }

    /// The relator of a one-relator presentation of positive degree.
    fn relator(&self) -> Result<SigmaPoly, GroupError> {
        let ideal = self.cyclic_ideal().ok_or_else(|| {
            GroupError::UnsupportedShape("only single-generator presentations are decided".into())
        })?;
        match ideal.as_slice() {
            [] => Err(GroupError::UnsupportedShape("the free module has no relator".into())),
            [a] if a.degree() == Some(0) => Err(GroupError::NotPositiveOrder),
            [a] => Ok(a.clone()),
            _ => match one_relator_hull(&ideal)? {
                HullResult::OrderZero => Err(GroupError::NotPositiveOrder),
                HullResult::OneRelator(_) => Err(GroupError::UnsupportedShape(
                    "non-principal ideal with a one-relator hull".into(),
                )),
            },
        }
    }
}

pub fn analyze(g: &DiagGroup) -> GroupReport {
    let sigma_dim = rank_zsigma(&g.module);
    let order = rank_z(&g.module);
    let connected = match has_z_torsion(&g.module) {
        Ok(t) => Answer::from(!t),
        Err(_) => Answer::Unsupported,
    };
    let almost_simple = match order {
        RankZ::Infinity | RankZ::Finite(0) => Answer::No,
        RankZ::Finite(_) => match is_almost_simple(g) {
            Ok(b) => Answer::from(b),
            Err(GroupError::NotPositiveOrder) => Answer::No,
            Err(_) => Answer::Unsupported,
        },
    };
    GroupReport { sigma_dim, order, connected, almost_simple }
}

/// For one-relator groups: the relator is irreducible in `Z[s]` of positive degree.
pub fn is_almost_simple(g: &DiagGroup) -> Result<bool, GroupError> {
    let alpha = g.relator()?;
    Ok(is_irreducible(&alpha)?)
}

/// `G_n`, the same group read over `s^n`.
pub fn gn(g: &DiagGroup, n: usize) -> DiagGroup {
    DiagGroup {
        module: restrict_scalars(&g.module, n),
        label: g.label.as_ref().map(|l| format!("{l}_{n}")),
    }
}

/// The composition factors of a one-relator group: primes of the content give order-zero
/// pieces, irreducible factors of positive degree give almost-simple quotients.
pub fn jordan_holder(g: &DiagGroup) -> Result<FactorSeries, GroupError> {
    let alpha = g.relator()?;
    let fac = factor_z(&alpha)?;
    let mut factors = Vec::new();
    for (f, k) in &fac.factors {
        for _ in 0..*k {
            factors.push(if f.degree() == Some(0) {
                Factor::OrderZeroPiece(f.coeff(0))
            } else {
                Factor::AlmostSimple(f.clone())
            });
        }
    }
    Ok(FactorSeries { sign: fac.sign, factors })
}
