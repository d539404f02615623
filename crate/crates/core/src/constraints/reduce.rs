use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ConstraintError;
use crate::expr::{CanonicalVar, Expr, Monomial};

/// Constraints solved as substitution rules, kept in triangular form so a
/// single simultaneous substitution reduces any expression fully.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuleSet {
    rules: BTreeMap<CanonicalVar, Expr>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_constraints<'a>(
        constraints: impl IntoIterator<Item = &'a Expr>,
    ) -> Result<Self, ConstraintError> {
        let mut rs = RuleSet::new();
        for c in constraints {
            rs.insert_constraint(c)?;
        }
        Ok(rs)
    }

    pub fn rules(&self) -> &BTreeMap<CanonicalVar, Expr> {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn reduce(&self, e: &Expr) -> Expr {
        e.substitute(&self.rules)
            .expect("rule right-hand sides never mention solved variables")
    }

    pub fn vanishes(&self, e: &Expr) -> bool {
        self.reduce(e).is_zero()
    }

    /// Solves `c = 0` for a variable that appears only linearly with a
    /// constant coefficient, preferring the latest variable in canonical
    /// order (momenta before coordinates). Returns the solved variable, or
    /// `None` when `c` already vanishes modulo the set.
    pub fn insert_constraint(&mut self, c: &Expr) -> Result<Option<CanonicalVar>, ConstraintError> {
        let r = self.reduce(c);
        if r.is_zero() {
            return Ok(None);
        }
        let solvable = |v: &CanonicalVar| {
            if matches!(v, CanonicalVar::T | CanonicalVar::P0) {
                return false;
            }
            let lone = Monomial::var(*v);
            !r.coefficient(&lone).is_zero()
                && r.terms().all(|(m, _)| m == &lone || m.exponent(v) == 0)
        };
        let Some(var) = r.vars().into_iter().rev().find(|v| solvable(v)) else {
            return Err(ConstraintError::NonSolvableConstraint(format!(
                "{r} has no variable appearing alone with a constant coefficient"
            )));
        };
        let coeff = r.coefficient(&Monomial::var(var));
        let lead = Expr::var(var).scale(&coeff);
        let rhs = (&r - &lead).scale(&(-(crate::expr::Rational::one()) / coeff));
        let single = BTreeMap::from([(var, rhs.clone())]);
        for existing in self.rules.values_mut() {
            *existing = existing.substitute(&single)?;
        }
        self.rules.insert(var, rhs);
        Ok(Some(var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn fixture_rules() {
        let cs = ["p3", "pi3 - v3", "x3"].map(|s| parse(s, 3).unwrap());
        let rs = RuleSet::from_constraints(cs.iter()).unwrap();
        assert_eq!(rs.rules()[&CanonicalVar::P(3)], Expr::zero());
        assert_eq!(
            rs.rules()[&CanonicalVar::Pi(3)],
            Expr::var(CanonicalVar::V(3))
        );
        assert_eq!(rs.rules()[&CanonicalVar::X(3)], Expr::zero());
        assert!(rs.vanishes(&parse("1/2*pi3^2 - 1/2*v3^2 + x3*p1", 3).unwrap()));
    }

    #[test]
    fn rules_stay_triangular() {
        let cs = ["x1 - v2", "v2 - 3"].map(|s| parse(s, 2).unwrap());
        let rs = RuleSet::from_constraints(cs.iter()).unwrap();
        assert_eq!(rs.reduce(&parse("x1", 2).unwrap()), parse("3", 2).unwrap());
    }

    #[test]
    fn nonlinear_constraint_is_not_solvable() {
        let c = parse("x1^2 + x1*v1", 1).unwrap();
        assert!(matches!(
            RuleSet::new().insert_constraint(&c),
            Err(ConstraintError::NonSolvableConstraint(_))
        ));
        let c = parse("1/2", 1).unwrap();
        assert!(RuleSet::new().insert_constraint(&c).is_err());
    }

    #[test]
    fn redundant_constraint_adds_nothing() {
        let mut rs = RuleSet::new();
        rs.insert_constraint(&parse("p1", 1).unwrap()).unwrap();
        assert_eq!(
            rs.insert_constraint(&parse("2*p1", 1).unwrap()).unwrap(),
            None
        );
    }
}
