//! Constraint analysis for singular Lagrangians with second-order fractional
//! derivatives.
//!
//! The coordinate jets `D^(a-1) q`, `D^a q` and `D^(2a) q` are treated as
//! independent coordinates, so the whole analysis runs on exact polynomials
//! ([`expr`]). From a Lagrangian the engine derives momenta, primary and
//! secondary constraints and their classification ([`constraints`]), the
//! total differential equations of motion and action ([`dynamics`]), and a
//! discretized path-integral kernel ([`kernel`]). [`fraccalc`] evaluates the
//! underlying fractional derivatives numerically.

pub mod constraints;
pub mod dynamics;
pub mod expr;
pub mod fraccalc;
pub mod kernel;
pub mod linalg;
pub mod parser;
pub mod quadrature;

pub use constraints::{
    analyze, AnalysisReport, ConstraintClass, ConstraintOrigin, ConstraintRecord, LagrangianModel,
};
pub use expr::{CanonicalVar, Expr, Poly, Rational};
pub use parser::{parse, render, ParseError, SourceSpan};
