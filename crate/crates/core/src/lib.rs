//! Coniveau and level realizations of classes in the Grothendieck ring of
//! varieties, and the filtered-Poincaré test of the generalized Hodge
//! conjecture built on them.
//!
//! The pipeline: a [`VarietyExpr`] or ring expression is normalized to a
//! [`MotivicClass`]; generator tables give the coniveau realization `nu`
//! as a [`FilteredHodgeClass`]; the level realization is
//! `lambda = gamma(phi(nu))`; [`ghc_check`] compares their filtered Poincaré
//! polynomials.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod ghc;
pub mod hodge;
pub mod output;
pub mod poly;
pub mod registry;
pub mod ring;
pub mod variety;

pub use error::{Error, Result};
pub use ghc::{
    degree_bound, ghc_check, ghc_check_table, ghc_transfer, kernel_check, GhcReport, TransferReport, TransferVerdict,
    Verdict,
};
pub use hodge::{gamma, phi, FilteredHodgeClass, Flagged, HodgeAtom, HodgeClass, Soundness};
pub use poly::FPPolynomial;
pub use registry::Registry;
pub use ring::{MotivicClass, Precision, Symbol, Term};
pub use variety::{VarietyError, VarietyExpr, VarietyTable};
