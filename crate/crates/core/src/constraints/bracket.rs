use std::collections::BTreeSet;

use super::ConstraintError;
use crate::expr::{CanonicalVar, Expr};

/// Poisson bracket on the phase space `(x_i, p_i)`, `(v_i, pi_i)`.
///
/// `t` and `p0` are inert parameters. Accelerations and higher jets are not
/// phase-space variables and are rejected.
pub fn poisson_bracket(a: &Expr, b: &Expr) -> Result<Expr, ConstraintError> {
    for e in [a, b] {
        if let Some(v) = e.vars().into_iter().find(CanonicalVar::is_jet) {
            return Err(ConstraintError::UnsupportedExpression(format!(
                "bracket argument contains {v}, which is not a phase-space variable"
            )));
        }
    }
    let indices: BTreeSet<u32> = a
        .vars()
        .into_iter()
        .chain(b.vars())
        .filter_map(|v| v.index())
        .collect();
    let mut out = Expr::zero();
    for i in indices {
        let pairs = [
            (CanonicalVar::X(i), CanonicalVar::P(i)),
            (CanonicalVar::V(i), CanonicalVar::Pi(i)),
        ];
        for (q, p) in pairs {
            let t1 = &a.diff(&q) * &b.diff(&p);
            let t2 = &a.diff(&p) * &b.diff(&q);
            out = &(&out + &t1) - &t2;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn pb(a: &str, b: &str) -> Expr {
        poisson_bracket(&parse(a, 4).unwrap(), &parse(b, 4).unwrap()).unwrap()
    }

    #[test]
    fn fundamental_brackets() {
        for i in 1..=4u32 {
            for j in 1..=4u32 {
                let delta = if i == j { Expr::one() } else { Expr::zero() };
                assert_eq!(pb(&format!("x{i}"), &format!("p{j}")), delta);
                assert_eq!(pb(&format!("v{i}"), &format!("pi{j}")), delta);
                for (a, b) in [
                    ("x", "x"),
                    ("v", "v"),
                    ("p", "p"),
                    ("pi", "pi"),
                    ("x", "v"),
                    ("x", "pi"),
                    ("v", "p"),
                    ("p", "pi"),
                ] {
                    assert!(
                        pb(&format!("{a}{i}"), &format!("{b}{j}")).is_zero(),
                        "{a}{i},{b}{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn fixture_secondary_bracket() {
        let h = "p1*v1 + p2*v2 + 1/2*(v1^2 + v2^2) - 1/2*x3^2 + 1/2*(pi1^2 + pi2^2)";
        assert_eq!(pb("p3", h), parse("x3", 3).unwrap());
        assert_eq!(pb("p3", &format!("p0 + {h}")), parse("x3", 3).unwrap());
        assert!(pb("pi1", "pi2").is_zero());
    }

    #[test]
    fn time_and_energy_are_inert() {
        assert!(pb("t", "p0").is_zero());
        assert_eq!(pb("t*x1", "p1"), parse("t", 1).unwrap());
    }

    #[test]
    fn jets_rejected() {
        let a = parse("a1", 1).unwrap();
        assert!(matches!(
            poisson_bracket(&a, &Expr::one()),
            Err(ConstraintError::UnsupportedExpression(_))
        ));
    }
}
