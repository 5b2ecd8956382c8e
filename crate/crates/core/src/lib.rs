//! Exact BPHZ renormalisation computed two ways: on connected Feynman
//! diagrams and on multi-indices (monomials recording vertex arities).
//!
//! Everything here is pure, allocation-only code with exact rational
//! coefficients. IO, parsing and the command-line front end live in the
//! companion `bphz` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bridge;
pub mod error;
pub mod feynman;
pub mod lincomb;
pub mod multiindex;
pub mod renorm;
pub mod symbolic;
pub mod valuation;

pub(crate) mod combinatorics;

pub use error::Error;
pub use feynman::{CanonDiagram, DiagForest, Diagram, HalfEdgeGraph};
pub use lincomb::{Coefficient, LinComb, Scalar};
pub use multiindex::{DegreeParams, MIForest, MultiIndex, Rule};
pub use symbolic::{Gen, SymbolicValue};
