//! Algebraic geometry over finite algebras.
//!
//! Equations over a finite algebra, their solution sets, radicals and
//! coordinate algebras; irreducible decomposition; presentations and the
//! word problem via congruence closure; local submodels and universal
//! classes; limit algebras of direct systems of diagram formulas; and a
//! checker that evaluates the seven unification conditions side by side.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod limits;
pub mod models;
pub mod order;
pub mod presentation;
pub mod suites;
pub mod syntax;
pub mod unify;

pub use algebra::{FiniteAlgebra, Homomorphism};
pub use error::{Budget, Error, ParseErrorKind, Result};
