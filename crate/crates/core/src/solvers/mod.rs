//! Solvers over the Frobenius difference field `(F_p-bar, x -> x^q)`.
//!
//! * [`linear`]: `sigma^d(Y) = A Y` by the Lang map, folding and unfolding, block companions.
//! * [`mult`]: systems `x^{beta_i} = a_i` in the multiplicative group, searched over `k^[n]`.
//! * [`additive`]: `sigma^m(x) + ... + lambda_0 x = a`.
//! * [`h1`]: canonical classes of one-relator torsors.

pub mod additive;
pub mod h1;
pub mod linear;
pub mod mult;

use thiserror::Error;

use crate::ffield::{FieldError, KnElem, Matrix, TowerElem};

pub use additive::{solve_additive, AdditiveEq};
pub use h1::h1_canonical;
pub use linear::{
    block_companion, extract_block_solution, fold_linear, lang_solve, unfold_linear_solution,
    LinDiffEq,
};
pub use mult::{mult_solve, torsor_search, unfold_mult_system, MultTorsor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("the matrix does not solve the folded equation")]
    NotASolution,
    #[error("no {0} columns with independent projections")]
    NoIndependentColumns(usize),
    #[error("witness failed verification: {0}")]
    Verification(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Matrix(Matrix),
    Units(Vec<KnElem>),
    Elem(TowerElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub n: usize,
    pub level: usize,
    pub witness: Witness,
}

/// Why a given `n` produced no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub n: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhausted {
    pub tried_n: usize,
    pub max_level: usize,
    pub attempts: Vec<Attempt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Found),
    Exhausted(Exhausted),
}

impl SolveOutcome {
    pub fn found(&self) -> Option<&Found> {
        match self {
            SolveOutcome::Found(f) => Some(f),
            SolveOutcome::Exhausted(_) => None,
        }
    }
}
