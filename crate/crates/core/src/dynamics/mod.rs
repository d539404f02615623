//! Total differential equations of motion, the action one-form, and their
//! numerical integration along gauge-fixed singular directions.
//!
//! With `H'_0 = p0 + H_0` and the primary constraints `H'_mu^p`, `H'_mu^pi`,
//! every phase variable obeys
//!
//! ```text
//!  dx_a  =  dH'_0/dp_a  dt + dH'_mu^p/dp_a  dx_mu + dH'_mu^pi/dp_a  dv_mu
//!  dv_a  =  dH'_0/dpi_a dt + ...
//! -dp_i  =  dH'_0/dx_i  dt + ...
//! -dpi_i =  dH'_0/dv_i  dt + ...
//! ```
//!
//! where `dx_mu`, `dv_mu` are free differentials fixed here by a gauge.

mod integrate;

pub use integrate::{
    action_along, integrate, GaugeChoice, GaugeFn, PhaseState, Sample, Trajectory,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::constraints::{AnalysisReport, Sector};
use crate::expr::{CanonicalVar, Expr, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("initial data violates {label}: residual {residual:e}")]
    ConstraintViolation { label: String, residual: f64 },
    #[error("state became non-finite at t = {t}")]
    NumericalBlowup { t: f64 },
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

/// `sign * d(target) = dt_coeff dt + sum dx_mu_coeff dx_mu + sum dv_mu_coeff dv_mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalDifferentialEquation {
    pub target: CanonicalVar,
    pub dt_coeff: Expr,
    pub dx_mu_coeff: BTreeMap<u32, Expr>,
    pub dv_mu_coeff: BTreeMap<u32, Expr>,
    /// +1 for coordinate equations, -1 for momentum equations.
    pub sign: i8,
}

impl TotalDifferentialEquation {
    /// Coefficients reduced modulo a constraint set.
    pub fn reduced(&self, rules: &crate::constraints::RuleSet) -> TotalDifferentialEquation {
        let red = |m: &BTreeMap<u32, Expr>| m.iter().map(|(k, e)| (*k, rules.reduce(e))).collect();
        TotalDifferentialEquation {
            target: self.target,
            dt_coeff: rules.reduce(&self.dt_coeff),
            dx_mu_coeff: red(&self.dx_mu_coeff),
            dv_mu_coeff: red(&self.dv_mu_coeff),
            sign: self.sign,
        }
    }
}

fn write_form(
    f: &mut fmt::Formatter<'_>,
    dt: &Expr,
    dx: &BTreeMap<u32, Expr>,
    dv: &BTreeMap<u32, Expr>,
) -> fmt::Result {
    let mut parts = Vec::new();
    let mut push = |c: &Expr, d: String| {
        if c.is_zero() {
            return;
        }
        let text = if c.len() > 1 {
            format!("({c})")
        } else {
            c.to_string()
        };
        parts.push(format!("{text} {d}"));
    };
    push(dt, "dt".into());
    for (mu, c) in dx {
        push(c, format!("dx{mu}"));
    }
    for (mu, c) in dv {
        push(c, format!("dv{mu}"));
    }
    if parts.is_empty() {
        f.write_str("0")
    } else {
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Display for TotalDifferentialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}d{} = ", self.target)?;
        write_form(f, &self.dt_coeff, &self.dx_mu_coeff, &self.dv_mu_coeff)
    }
}

/// `dS = dt_coeff dt + sum dx_mu_coeff dx_mu + sum dv_mu_coeff dv_mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionForm {
    pub dt_coeff: Expr,
    pub dx_mu_coeff: BTreeMap<u32, Expr>,
    pub dv_mu_coeff: BTreeMap<u32, Expr>,
}

impl fmt::Display for ActionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("dS = ")?;
        write_form(f, &self.dt_coeff, &self.dx_mu_coeff, &self.dv_mu_coeff)
    }
}

impl ActionForm {
    /// Potential `F` with `dF = sum dx_mu_coeff dx_mu + dv_mu_coeff dv_mu`,
    /// normalized by `F(0) = 0`, when the singular part of the form is an
    /// exact differential in the gauge variables alone.
    pub fn mu_potential(&self, singular: &[u32]) -> Option<Expr> {
        let gauge_var = |v: &CanonicalVar| matches!(v, CanonicalVar::X(m) | CanonicalVar::V(m) if singular.contains(m));
        let mut slots: Vec<(CanonicalVar, &Expr)> = Vec::new();
        for (mu, c) in &self.dx_mu_coeff {
            slots.push((CanonicalVar::X(*mu), c));
        }
        for (mu, c) in &self.dv_mu_coeff {
            slots.push((CanonicalVar::V(*mu), c));
        }
        if slots
            .iter()
            .any(|(_, c)| c.vars().iter().any(|v| !gauge_var(v)))
        {
            return None;
        }
        let coeff_of = |y: &CanonicalVar| {
            slots
                .iter()
                .find(|(v, _)| v == y)
                .map(|(_, c)| (*c).clone())
                .unwrap_or_else(Expr::zero)
        };
        let mut vars: Vec<CanonicalVar> = slots.iter().map(|(v, _)| *v).collect();
        for (_, c) in &slots {
            vars.extend(c.vars());
        }
        vars.sort();
        vars.dedup();
        for (i, y) in vars.iter().enumerate() {
            for z in &vars[i + 1..] {
                if coeff_of(y).diff(z) != coeff_of(z).diff(y) {
                    return None;
                }
            }
        }
        // Radial homotopy: F = sum_k y_k * int_0^1 c_k(s y) ds.
        let mut f = Expr::zero();
        for (y, c) in &slots {
            let integrated = Expr::from_terms(c.terms().map(|(m, k)| {
                (
                    m.clone(),
                    k / Rational::from_integer((m.degree() + 1).into()),
                )
            }));
            f = &f + &(&Expr::var(*y) * &integrated);
        }
        Some(f)
    }
}

fn primary_expr(report: &AnalysisReport, mu: u32, sector: Sector) -> Option<&Expr> {
    report.primary(mu, sector).map(|c| &c.expr)
}

fn mu_coeffs(report: &AnalysisReport, sector: Sector, wrt: &CanonicalVar) -> BTreeMap<u32, Expr> {
    report
        .singular_idx()
        .iter()
        .filter_map(|&mu| primary_expr(report, mu, sector).map(|h| (mu, h.diff(wrt))))
        .collect()
}

/// One equation per `x_a`, `v_a` (regular `a`) and per `p_i`, `pi_i`.
pub fn derive_equations_of_motion(report: &AnalysisReport) -> Vec<TotalDifferentialEquation> {
    let eq = |target: CanonicalVar, wrt: CanonicalVar, sign: i8| TotalDifferentialEquation {
        target,
        dt_coeff: report.h0prime.diff(&wrt),
        dx_mu_coeff: mu_coeffs(report, Sector::P, &wrt),
        dv_mu_coeff: mu_coeffs(report, Sector::Pi, &wrt),
        sign,
    };
    let mut out = Vec::new();
    for &a in report.regular_idx() {
        out.push(eq(CanonicalVar::X(a), CanonicalVar::P(a), 1));
    }
    for &a in report.regular_idx() {
        out.push(eq(CanonicalVar::V(a), CanonicalVar::Pi(a), 1));
    }
    for i in 1..=report.n() {
        out.push(eq(CanonicalVar::P(i), CanonicalVar::X(i), -1));
    }
    for i in 1..=report.n() {
        out.push(eq(CanonicalVar::Pi(i), CanonicalVar::V(i), -1));
    }
    out
}

/// `-H + p_a dH/dp_a + pi_a dH/dpi_a`, summed over regular `a`.
fn legendre(report: &AnalysisReport, h: &Expr) -> Expr {
    let mut out = -h.clone();
    for &a in report.regular_idx() {
        for p in [CanonicalVar::P(a), CanonicalVar::Pi(a)] {
            out = &out + &(&Expr::var(p) * &h.diff(&p));
        }
    }
    out
}

/// The action one-form, as derived and with the second-class constraints
/// solved out. The `dt` coefficient uses `H_0`; the additive `p0` of `H'_0`
/// is not part of the action density.
pub fn derive_action_form(report: &AnalysisReport) -> (ActionForm, ActionForm) {
    let mu_form = |sector: Sector, momentum: fn(u32) -> CanonicalVar| {
        report
            .singular_idx()
            .iter()
            .filter_map(|&mu| {
                let h_prime = primary_expr(report, mu, sector)?;
                // H'_mu = momentum + H_mu
                let h = h_prime - &Expr::var(momentum(mu));
                Some((mu, legendre(report, &h)))
            })
            .collect::<BTreeMap<u32, Expr>>()
    };
    let general = ActionForm {
        dt_coeff: legendre(report, &report.h0),
        dx_mu_coeff: mu_form(Sector::P, CanonicalVar::P),
        dv_mu_coeff: mu_form(Sector::Pi, CanonicalVar::Pi),
    };
    let rules = report.second_class_rules();
    let red = |m: &BTreeMap<u32, Expr>| -> BTreeMap<u32, Expr> {
        m.iter().map(|(k, e)| (*k, rules.reduce(e))).collect()
    };
    let reduced = ActionForm {
        dt_coeff: rules.reduce(&general.dt_coeff),
        dx_mu_coeff: red(&general.dx_mu_coeff),
        dv_mu_coeff: red(&general.dv_mu_coeff),
    };
    (general, reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{analyze, LagrangianModel};
    use crate::parser::parse;

    const FIXTURE: &str = "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3";

    fn report() -> AnalysisReport {
        analyze(&LagrangianModel::new(3, parse(FIXTURE, 3).unwrap()).unwrap()).unwrap()
    }

    fn e(s: &str) -> Expr {
        parse(s, 3).unwrap()
    }

    fn find(eqs: &[TotalDifferentialEquation], v: CanonicalVar) -> &TotalDifferentialEquation {
        eqs.iter().find(|q| q.target == v).unwrap()
    }

    #[test]
    fn fixture_equations() {
        let r = report();
        let eqs = derive_equations_of_motion(&r);
        assert_eq!(eqs.len(), 2 + 2 + 3 + 3);
        let x1 = find(&eqs, CanonicalVar::X(1));
        assert_eq!(x1.dt_coeff, e("v1"));
        assert!(x1
            .dx_mu_coeff
            .values()
            .chain(x1.dv_mu_coeff.values())
            .all(Expr::is_zero));
        assert_eq!(find(&eqs, CanonicalVar::V(2)).dt_coeff, e("pi2"));
        let pi1 = find(&eqs, CanonicalVar::Pi(1));
        assert_eq!((pi1.sign, &pi1.dt_coeff), (-1, &e("p1 + v1")));
        assert!(find(&eqs, CanonicalVar::P(1)).dt_coeff.is_zero());
        let pi3 = find(&eqs, CanonicalVar::Pi(3));
        assert!(pi3.dt_coeff.is_zero());
        assert_eq!(
            pi3.dv_mu_coeff[&3],
            Expr::constant(Rational::from_integer((-1).into()))
        );
        assert_eq!(pi3.to_string(), "-dpi3 = -1 dv3");
        // -dp3 = -x3 dt vanishes on the constraint surface.
        let p3 = find(&eqs, CanonicalVar::P(3));
        assert_eq!(p3.dt_coeff, e("-x3"));
        assert!(p3.reduced(&r.rules()).dt_coeff.is_zero());
        assert_eq!(
            find(&eqs, CanonicalVar::Pi(2)).to_string(),
            "-dpi2 = (p2 + v2) dt"
        );
    }

    #[test]
    fn fixture_action_forms() {
        let (general, reduced) = derive_action_form(&report());
        assert_eq!(
            general.dt_coeff,
            e("1/2*(pi1^2 + pi2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2")
        );
        assert_eq!(general.dv_mu_coeff[&3], e("v3"));
        assert!(general.dx_mu_coeff[&3].is_zero());
        assert_eq!(
            reduced.dt_coeff,
            e("1/2*(pi1^2 + pi2^2) - 1/2*(v1^2 + v2^2)")
        );
        assert_eq!(reduced.mu_potential(&[3]), Some(e("1/2*v3^2")));
    }

    #[test]
    fn potential_of_exact_and_inexact_forms() {
        let form = |dx: &str, dv: &str| ActionForm {
            dt_coeff: Expr::zero(),
            dx_mu_coeff: BTreeMap::from([(1, e(dx))]),
            dv_mu_coeff: BTreeMap::from([(1, e(dv))]),
        };
        let f = form("v1 + 2*x1", "x1 + 3*v1^2").mu_potential(&[1]).unwrap();
        assert_eq!(f, e("x1*v1 + x1^2 + v1^3"));
        assert_eq!(form("v1", "0").mu_potential(&[1]), None);
        assert_eq!(form("p1", "0").mu_potential(&[1]), None);
    }

    #[test]
    fn regular_model_has_no_mu_terms() {
        let r =
            analyze(&LagrangianModel::new(1, parse("1/2*a1^2 - 1/2*x1^2", 1).unwrap()).unwrap())
                .unwrap();
        let eqs = derive_equations_of_motion(&r);
        assert_eq!(eqs.len(), 4);
        assert!(eqs
            .iter()
            .all(|q| q.dx_mu_coeff.is_empty() && q.dv_mu_coeff.is_empty()));
        let (g, red) = derive_action_form(&r);
        assert_eq!(g, red);
        assert_eq!(g.dt_coeff, parse("1/2*pi1^2 - 1/2*x1^2", 1).unwrap());
    }
}
