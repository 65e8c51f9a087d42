//! Exact invariants of diagonalizable difference groups and solvers for their torsors.
//!
//! * [`zsig`]: the ring `Z[s]` of integer polynomials in the Frobenius symbol.
//! * [`zsig_module`]: finitely presented `Z[s]`-modules.
//! * [`diag_group`]: diagonalizable difference groups through their character modules.
//! * [`ffield`]: the Frobenius tower over `F_p` and the products `k^[n]`.
//! * [`solvers`]: Lang's theorem, multiplicative and additive systems, first cohomology.

pub mod cli;
pub mod diag_group;
pub mod ffield;
pub mod smith;
pub mod solvers;
pub mod zsig;
pub mod zsig_module;
