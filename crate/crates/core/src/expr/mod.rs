//! Exact multivariate polynomials over canonical jet variables.
//!
//! [`Poly`] is generic over its variable type so that the same engine serves
//! the phase-space algebra ([`Expr`], over [`CanonicalVar`]) and the
//! discretized path-integral action (over grid node variables).

mod poly;
mod raw;
mod sample;
mod var;

pub use poly::{Monomial, Poly, Variable};
pub use raw::{normalize, RawExpr};
pub use sample::{phase_space_vars, random_poly};
pub use var::{CanonicalVar, VarKind};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Polynomial over canonical jet and momentum variables.
pub type Expr = Poly<CanonicalVar>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
}

/// Rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

impl Expr {
    /// Total time derivative under jet prolongation:
    /// x -> v -> a -> j_1 -> j_2 -> ..., and t -> 1.
    pub fn total_time_derivative(&self) -> Result<Expr, ExprError> {
        if let Some(v) = self.vars().into_iter().find(|v| v.is_momentum()) {
            return Err(ExprError::UnsupportedExpression(format!(
                "time derivative of an expression containing momentum {v}"
            )));
        }
        let mut out = Expr::zero();
        for v in self.vars() {
            let next = match v {
                CanonicalVar::T => Expr::one(),
                CanonicalVar::X(i) => Expr::var(CanonicalVar::V(i)),
                CanonicalVar::V(i) => Expr::var(CanonicalVar::A(i)),
                CanonicalVar::A(i) => Expr::var(CanonicalVar::J(i, 1)),
                CanonicalVar::J(i, k) => Expr::var(CanonicalVar::J(i, k + 1)),
                _ => unreachable!("momenta rejected above"),
            };
            out = &out + &(&self.diff(&v) * &next);
        }
        Ok(out)
    }

    /// True iff `self - other` normalizes to zero.
    pub fn equal(&self, other: &Expr) -> bool {
        (self - other).is_zero()
    }
}

/// Simultaneous substitution of `rules` into `e`.
///
/// A rule set where some right-hand side mentions a left-hand variable is
/// rejected: simultaneous and sequential readings would disagree.
pub fn substitute(e: &Expr, rules: &BTreeMap<CanonicalVar, Expr>) -> Result<Expr, ExprError> {
    e.substitute(rules)
}
