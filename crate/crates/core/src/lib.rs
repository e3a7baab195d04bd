//! Exact computations in the bigraded Jacobian rings of cyclic covers of
//! projective space branched along hyperplane arrangements.
//!
//! The crate builds the master polynomial and its Jacobian ideal, computes
//! invariant graded pieces of the quotient ring, multiplication (Higgs) maps,
//! the quadric system cutting out the first characteristic subvariety, and
//! checks the explicit relations, coefficient formulas, resultants and
//! dimension bounds attached to them. Everything runs over `Q` or a prime
//! field `F_p`; nothing is floating point.

pub mod arrangement;
pub mod charvar;
pub mod combinatorics;
pub mod error;
pub mod higgs;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod weights;

pub use arrangement::{ArrangementMatrix, GenericParams};
pub use error::{Error, Result};
pub use poly::{Field, Monomial, Polynomial, Scalar, Var};
