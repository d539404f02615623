use num_traits::{Signed, ToPrimitive};

use super::{CanonicalVar, Expr, ExprError, Rational};

/// Unnormalized expression tree, as produced by the parser or built by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum RawExpr {
    Num(Rational),
    Var(CanonicalVar),
    Neg(Box<RawExpr>),
    Add(Vec<RawExpr>),
    Mul(Vec<RawExpr>),
    /// Base and exponent. The exponent must normalize to a non-negative
    /// integer constant.
    Pow(Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    pub fn pow(base: RawExpr, exp: RawExpr) -> RawExpr {
        RawExpr::Pow(Box::new(base), Box::new(exp))
    }
}

/// Expands and collects a raw tree into canonical polynomial form.
pub fn normalize(e: &RawExpr) -> Result<Expr, ExprError> {
    match e {
        RawExpr::Num(r) => Ok(Expr::constant(r.clone())),
        RawExpr::Var(v) => Ok(Expr::var(*v)),
        RawExpr::Neg(inner) => Ok(-normalize(inner)?),
        RawExpr::Add(items) => items
            .iter()
            .try_fold(Expr::zero(), |acc, it| Ok(&acc + &normalize(it)?)),
        RawExpr::Mul(items) => items
            .iter()
            .try_fold(Expr::one(), |acc, it| Ok(&acc * &normalize(it)?)),
        RawExpr::Pow(base, exp) => {
            let exp = normalize(exp)?;
            let k = exp.as_constant().ok_or_else(|| {
                ExprError::UnsupportedExpression(format!("non-constant exponent {exp}"))
            })?;
            if !k.is_integer() {
                return Err(ExprError::UnsupportedExpression(format!(
                    "fractional exponent {k}"
                )));
            }
            if k.is_negative() {
                return Err(ExprError::UnsupportedExpression(format!(
                    "negative exponent {k}"
                )));
            }
            let k = k.to_integer().to_u32().ok_or_else(|| {
                ExprError::UnsupportedExpression(format!("exponent {k} too large"))
            })?;
            Ok(normalize(base)?.pow(k))
        }
    }
}
