//! Finite fields, the Frobenius tower over `F_p`, and the twisted products `k^[n]`.

pub mod arith;
pub mod dense;
pub mod field;
pub mod fplin;
pub mod kn;
pub mod matrix;
pub mod poly;
pub mod tower;

pub use field::{FiniteField, PrimeField};
pub use kn::{base_embed, kn_embed, kn_sigma, project_last, KnElem, KnMatrix};
pub use matrix::Matrix;
pub use poly::{Poly, PolyRing};
pub use tower::{Caps, FieldError, FieldTower, LevelField, TowerElem};
