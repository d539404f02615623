use std::fmt;

use super::{
    poisson_bracket, ConstraintClass, ConstraintError, ConstraintOrigin, ConstraintRecord, RuleSet,
};
use crate::expr::{CanonicalVar, Expr};

/// What happened to one constraint during a closure pass.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosureOutcome {
    /// The bracket with `H'_0` vanishes modulo the constraint set.
    Vanishes,
    /// The bracket is nonzero but some primary has a nonvanishing bracket
    /// with the constraint, so a multiplier can absorb it.
    Absorbed { partners: Vec<String> },
    /// The bracket is a new (secondary) constraint.
    Secondary { label: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureEntry {
    pub pass: usize,
    pub label: String,
    pub constraint: Expr,
    /// `{phi, H'_0}` reduced modulo the constraint set at the time.
    pub bracket_with_h: Expr,
    pub outcome: ClosureOutcome,
}

/// Derivation trace of the consistency (closure) algorithm.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClosureLog {
    pub entries: Vec<ClosureEntry>,
    /// Solved form of the final constraint set.
    pub rules: Vec<(CanonicalVar, Expr)>,
    pub passes: usize,
}

impl fmt::Display for ClosureLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "pass {}: {{{}, H'0}} = {} mod constraints -> ",
                e.pass, e.label, e.bracket_with_h
            )?;
            match &e.outcome {
                ClosureOutcome::Vanishes => writeln!(f, "vanishes")?,
                ClosureOutcome::Absorbed { partners } => {
                    writeln!(f, "absorbed by multipliers of {}", partners.join(", "))?
                }
                ClosureOutcome::Secondary { label } => writeln!(f, "new secondary {label}")?,
            }
        }
        for (v, rhs) in &self.rules {
            writeln!(f, "reduce: {v} -> {rhs}")?;
        }
        Ok(())
    }
}

/// Repeats consistency passes until one adds nothing.
///
/// For each constraint `phi`, `{phi, H'_0}` is reduced modulo the current
/// set. A nonvanishing remainder that no primary can absorb (all brackets of
/// `phi` with primaries vanish) becomes a secondary constraint.
pub fn constraint_closure(
    n: u32,
    h0prime: &Expr,
    primaries: &[ConstraintRecord],
) -> Result<(Vec<ConstraintRecord>, ClosureLog), ConstraintError> {
    let mut all: Vec<ConstraintRecord> = primaries.to_vec();
    let mut rules = RuleSet::from_constraints(all.iter().map(|c| &c.expr))?;
    let mut log = ClosureLog::default();
    let limit = 2 * n as usize;

    loop {
        log.passes += 1;
        let pass = log.passes;
        let snapshot = all.clone();
        let mut added = 0;
        for phi in &snapshot {
            let bracket = rules.reduce(&poisson_bracket(&phi.expr, h0prime)?);
            let outcome = if bracket.is_zero() {
                ClosureOutcome::Vanishes
            } else {
                let mut partners = Vec::new();
                for psi in primaries {
                    if !rules.vanishes(&poisson_bracket(&phi.expr, &psi.expr)?) {
                        partners.push(psi.label.clone());
                    }
                }
                if !partners.is_empty() {
                    ClosureOutcome::Absorbed { partners }
                } else {
                    rules.insert_constraint(&bracket)?;
                    let record = ConstraintRecord::secondary_of(phi, bracket.clone());
                    let label = record.label.clone();
                    all.push(record);
                    added += 1;
                    if all.len() > limit {
                        return Err(ConstraintError::ClosureOverflow(all.len()));
                    }
                    ClosureOutcome::Secondary { label }
                }
            };
            log.entries.push(ClosureEntry {
                pass,
                label: phi.label.clone(),
                constraint: phi.expr.clone(),
                bracket_with_h: bracket,
                outcome,
            });
        }
        if added == 0 {
            break;
        }
    }
    log.rules = rules.rules().iter().map(|(v, e)| (*v, e.clone())).collect();
    Ok((all, log))
}

/// First class iff the bracket with every constraint in the set vanishes
/// modulo the set.
pub fn classify(
    constraints: &[ConstraintRecord],
) -> Result<Vec<ConstraintRecord>, ConstraintError> {
    let rules = RuleSet::from_constraints(constraints.iter().map(|c| &c.expr))?;
    constraints
        .iter()
        .map(|phi| {
            let mut first = true;
            for psi in constraints {
                if !rules.vanishes(&poisson_bracket(&phi.expr, &psi.expr)?) {
                    first = false;
                    break;
                }
            }
            let mut out = phi.clone();
            out.class = if first {
                ConstraintClass::First
            } else {
                ConstraintClass::Second
            };
            Ok(out)
        })
        .collect()
}

impl ConstraintRecord {
    fn secondary_of(parent: &ConstraintRecord, expr: Expr) -> ConstraintRecord {
        let generation = parent.generation + 1;
        ConstraintRecord {
            label: ConstraintRecord::make_label(generation, parent.coord, parent.sector),
            origin: ConstraintOrigin::Secondary,
            expr,
            class: ConstraintClass::Unresolved,
            coord: parent.coord,
            sector: parent.sector,
            generation,
        }
    }
}
