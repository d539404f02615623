//! Constraint analysis of second-order singular Lagrangians.
//!
//! The pipeline run by [`analyze`]:
//!
//! 1. Hessian of `L` in the accelerations `a_i` and its rank, which splits
//!    the coordinates into regular (`a`) and singular (`mu`) indices.
//! 2. Momenta `pi_i = dL/da_i` and `p_i = dL/dv_i - d/dt(dL/da_i)`.
//! 3. Primary constraints `pi_mu + H_mu^pi = 0` and `p_mu + H_mu^p = 0`.
//! 4. Canonical Hamiltonian `H_0` on the reduced phase space.
//! 5. Consistency of the constraints under `H'_0 = p0 + H_0`, producing
//!    secondary constraints, then first/second-class classification.
//!
//! Supported Lagrangians are quadratic in the accelerations with a constant
//! Hessian and arbitrary polynomial dependence on `t`, `x` and `v`.

mod bracket;
mod closure;
mod reduce;

pub use bracket::poisson_bracket;
pub use closure::{classify, constraint_closure, ClosureEntry, ClosureLog, ClosureOutcome};
pub use reduce::RuleSet;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::expr::{CanonicalVar, Expr, ExprError, Rational};
use crate::linalg::{self, RatMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstraintError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("Hessian rank could not be decided at generic points")]
    RankUndecided,
    #[error("unsupported Lagrangian: {0}")]
    UnsupportedLagrangian(String),
    #[error("momentum not reducible: {0}")]
    NotReducible(String),
    #[error("higher jet leaks into a constraint: {0}")]
    JetLeak(String),
    #[error("Hamiltonian not reduced: {0}")]
    HamiltonianNotReduced(String),
    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),
    #[error("constraint cannot be solved for a single variable: {0}")]
    NonSolvableConstraint(String),
    #[error("closure produced {0} constraints, more than twice the coordinate count")]
    ClosureOverflow(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Pipeline stage at which [`analyze`] failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Hessian,
    Rank,
    Momenta,
    PrimaryConstraints,
    Hamiltonian,
    Closure,
    Classification,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Hessian => "hessian",
            Stage::Rank => "rank",
            Stage::Momenta => "momenta",
            Stage::PrimaryConstraints => "primary constraints",
            Stage::Hamiltonian => "hamiltonian",
            Stage::Closure => "closure",
            Stage::Classification => "classification",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct AnalysisError {
    pub stage: Stage,
    #[source]
    pub source: ConstraintError,
}

/// A Lagrangian over `t`, `x_i`, `v_i`, `a_i` for coordinates `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianModel {
    n: u32,
    lagrangian: Expr,
}

impl LagrangianModel {
    pub fn new(n: u32, lagrangian: Expr) -> Result<Self, ConstraintError> {
        if n == 0 {
            return Err(ConstraintError::InvalidModel(
                "coordinate count must be positive".into(),
            ));
        }
        for v in lagrangian.vars() {
            let allowed = matches!(
                v,
                CanonicalVar::T | CanonicalVar::X(_) | CanonicalVar::V(_) | CanonicalVar::A(_)
            );
            if !allowed {
                return Err(ConstraintError::InvalidModel(format!(
                    "Lagrangian may only contain t, x, v, a; found {v}"
                )));
            }
            if v.index().is_some_and(|i| i == 0 || i > n) {
                return Err(ConstraintError::InvalidModel(format!(
                    "{v} outside 1..={n}"
                )));
            }
        }
        Ok(LagrangianModel { n, lagrangian })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lagrangian(&self) -> &Expr {
        &self.lagrangian
    }

    fn coords(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }
}

/// Regular/singular split of the coordinate indices (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSplit {
    pub rank: usize,
    pub regular: Vec<u32>,
    pub singular: Vec<u32>,
}

/// `p[i-1]` and `pi[i-1]` are the momentum expressions of coordinate `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentaSet {
    pub p: Vec<Expr>,
    pub pi: Vec<Expr>,
}

impl MomentaSet {
    pub fn p(&self, i: u32) -> &Expr {
        &self.p[i as usize - 1]
    }

    pub fn pi(&self, i: u32) -> &Expr {
        &self.pi[i as usize - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintOrigin {
    PrimaryP,
    PrimaryPi,
    Secondary,
}

impl fmt::Display for ConstraintOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintOrigin::PrimaryP => "primary-p",
            ConstraintOrigin::PrimaryPi => "primary-pi",
            ConstraintOrigin::Secondary => "secondary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintClass {
    First,
    Second,
    Unresolved,
}

impl fmt::Display for ConstraintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintClass::First => "first",
            ConstraintClass::Second => "second",
            ConstraintClass::Unresolved => "unresolved",
        })
    }
}

/// Momentum sector a constraint descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    P,
    Pi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRecord {
    /// `H'3^p`, `H'3^pi`, `H''3^p`, ...
    pub label: String,
    pub origin: ConstraintOrigin,
    /// Vanishes on the constraint surface; phase-space variables only.
    pub expr: Expr,
    pub class: ConstraintClass,
    /// The singular coordinate this constraint is attached to.
    pub coord: u32,
    pub sector: Sector,
    /// 1 for primaries, +1 per consistency step.
    pub generation: u32,
}

impl ConstraintRecord {
    fn primary(coord: u32, sector: Sector, expr: Expr) -> Self {
        ConstraintRecord {
            label: Self::make_label(1, coord, sector),
            origin: match sector {
                Sector::P => ConstraintOrigin::PrimaryP,
                Sector::Pi => ConstraintOrigin::PrimaryPi,
            },
            expr,
            class: ConstraintClass::Unresolved,
            coord,
            sector,
            generation: 1,
        }
    }

    fn make_label(generation: u32, coord: u32, sector: Sector) -> String {
        let s = match sector {
            Sector::P => "p",
            Sector::Pi => "pi",
        };
        format!("H{}{coord}^{s}", "'".repeat(generation as usize))
    }
}

/// Everything [`analyze`] derives from a model.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub model: LagrangianModel,
    pub hessian: Vec<Vec<Expr>>,
    pub split: IndexSplit,
    /// `a_a` in terms of `x`, `v`, `pi_a` (and `a_mu` when the Hessian
    /// couples regular and singular accelerations).
    pub accel_solutions: BTreeMap<CanonicalVar, Expr>,
    pub momenta: MomentaSet,
    pub h0: Expr,
    /// `p0 + H_0`.
    pub h0prime: Expr,
    pub constraints: Vec<ConstraintRecord>,
    pub closure_log: ClosureLog,
}

impl AnalysisReport {
    pub fn n(&self) -> u32 {
        self.model.n
    }

    pub fn rank(&self) -> usize {
        self.split.rank
    }

    pub fn regular_idx(&self) -> &[u32] {
        &self.split.regular
    }

    pub fn singular_idx(&self) -> &[u32] {
        &self.split.singular
    }

    pub fn primaries(&self) -> impl Iterator<Item = &ConstraintRecord> {
        self.constraints
            .iter()
            .filter(|c| c.origin != ConstraintOrigin::Secondary)
    }

    pub fn primary(&self, coord: u32, sector: Sector) -> Option<&ConstraintRecord> {
        self.primaries()
            .find(|c| c.coord == coord && c.sector == sector)
    }

    /// Rules solving every constraint.
    pub fn rules(&self) -> RuleSet {
        RuleSet::from_constraints(self.constraints.iter().map(|c| &c.expr))
            .expect("constraint set was solvable during closure")
    }

    /// Rules solving the second-class constraints only.
    pub fn second_class_rules(&self) -> RuleSet {
        RuleSet::from_constraints(
            self.constraints
                .iter()
                .filter(|c| c.class == ConstraintClass::Second)
                .map(|c| &c.expr),
        )
        .expect("subset of a solvable constraint set")
    }
}

/// `W_ij = d^2 L / da_i da_j`.
pub fn hessian(model: &LagrangianModel) -> Vec<Vec<Expr>> {
    let first: Vec<Expr> = model
        .coords()
        .map(|i| model.lagrangian.diff(&CanonicalVar::A(i)))
        .collect();
    first
        .iter()
        .map(|d| {
            model
                .coords()
                .map(|j| d.diff(&CanonicalVar::A(j)))
                .collect()
        })
        .collect()
}

const RANK_SEED: u64 = 0x5e_ed0f_5a9e;
const RANK_ATTEMPTS: usize = 5;

/// Rank of the (symmetric) Hessian and the regular/singular split.
///
/// Constant matrices are handled exactly. Otherwise the matrix is evaluated
/// at pseudo-random rational points; the maximal rank must be observed at
/// least twice within [`RANK_ATTEMPTS`] points.
pub fn hessian_rank(w: &[Vec<Expr>]) -> Result<IndexSplit, ConstraintError> {
    let n = w.len();
    let constant: Option<RatMatrix> = w
        .iter()
        .map(|row| {
            row.iter()
                .map(Expr::as_constant)
                .collect::<Option<Vec<_>>>()
        })
        .collect();
    let basis = match constant {
        Some(m) => linalg::column_basis(&m),
        None => {
            let mut rng = StdRng::seed_from_u64(RANK_SEED);
            let mut seen: Vec<Vec<usize>> = Vec::new();
            loop {
                let mut point: BTreeMap<CanonicalVar, Rational> = BTreeMap::new();
                let m: RatMatrix = w
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                e.eval_exact(|v| {
                                    point
                                        .entry(*v)
                                        .or_insert_with(|| {
                                            crate::expr::rat(
                                                rng.gen_range(-40..=40),
                                                rng.gen_range(1..=13),
                                            )
                                        })
                                        .clone()
                                })
                            })
                            .collect()
                    })
                    .collect();
                seen.push(linalg::column_basis(&m));
                let best = seen.iter().map(Vec::len).max().unwrap_or(0);
                let hits: Vec<&Vec<usize>> = seen.iter().filter(|b| b.len() == best).collect();
                if hits.len() >= 2 {
                    break hits[0].clone();
                }
                if seen.len() >= RANK_ATTEMPTS {
                    return Err(ConstraintError::RankUndecided);
                }
            }
        }
    };
    let regular: Vec<u32> = basis.iter().map(|&j| j as u32 + 1).collect();
    let singular: Vec<u32> = (1..=n as u32).filter(|i| !regular.contains(i)).collect();
    Ok(IndexSplit {
        rank: regular.len(),
        regular,
        singular,
    })
}

/// `pi_i = dL/da_i`, `p_i = dL/dv_i - d/dt(dL/da_i)`.
pub fn momenta(model: &LagrangianModel) -> Result<MomentaSet, ConstraintError> {
    let mut p = Vec::new();
    let mut pi = Vec::new();
    for i in model.coords() {
        let pi_i = model.lagrangian.diff(&CanonicalVar::A(i));
        let p_i = &model.lagrangian.diff(&CanonicalVar::V(i)) - &pi_i.total_time_derivative()?;
        p.push(p_i);
        pi.push(pi_i);
    }
    Ok(MomentaSet { p, pi })
}

fn is_accel(v: &CanonicalVar) -> bool {
    matches!(v, CanonicalVar::A(_))
}

fn constant_hessian(model: &LagrangianModel) -> Result<RatMatrix, ConstraintError> {
    if model.lagrangian.degree_in(is_accel) > 2 {
        return Err(ConstraintError::UnsupportedLagrangian(
            "Lagrangian is more than quadratic in the accelerations".into(),
        ));
    }
    hessian(model)
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    e.as_constant().ok_or_else(|| {
                        ConstraintError::UnsupportedLagrangian(format!(
                            "Hessian entry {e} is not constant"
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

/// Solves the regular momentum relations for the regular accelerations and
/// emits the primary constraints of every singular coordinate.
pub fn primary_constraints(
    model: &LagrangianModel,
    momenta: &MomentaSet,
    split: &IndexSplit,
) -> Result<(BTreeMap<CanonicalVar, Expr>, Vec<ConstraintRecord>), ConstraintError> {
    let w = constant_hessian(model)?;
    let reg: Vec<usize> = split.regular.iter().map(|&i| i as usize - 1).collect();
    let inv = linalg::inverse(&linalg::submatrix(&w, &reg, &reg)).ok_or_else(|| {
        ConstraintError::UnsupportedLagrangian("regular Hessian block is singular".into())
    })?;

    let no_accel: BTreeMap<CanonicalVar, Expr> = model
        .coords()
        .map(|j| (CanonicalVar::A(j), Expr::zero()))
        .collect();
    // pi_a - c_a - sum_mu W_a,mu a_mu, with c_a the acceleration-free part.
    let rhs: Vec<Expr> = split
        .regular
        .iter()
        .map(|&a| {
            let c = momenta.pi(a).substitute(&no_accel)?;
            let mut r = &Expr::var(CanonicalVar::Pi(a)) - &c;
            for &mu in &split.singular {
                let coupling = &w[a as usize - 1][mu as usize - 1];
                if !coupling.is_zero() {
                    r = &r - &Expr::var(CanonicalVar::A(mu)).scale(coupling);
                }
            }
            Ok(r)
        })
        .collect::<Result<_, ConstraintError>>()?;
    let accel: BTreeMap<CanonicalVar, Expr> = split
        .regular
        .iter()
        .enumerate()
        .map(|(r, &a)| {
            let sol = rhs
                .iter()
                .enumerate()
                .fold(Expr::zero(), |acc, (k, e)| &acc + &e.scale(&inv[r][k]));
            (CanonicalVar::A(a), sol)
        })
        .collect();

    let mut constraints = Vec::new();
    for &mu in &split.singular {
        let pi_mu = momenta.pi(mu).substitute(&accel)?;
        if pi_mu.any_var(is_accel) {
            return Err(ConstraintError::NotReducible(format!(
                "pi{mu} = {pi_mu} still depends on accelerations"
            )));
        }
        let p_mu = momenta.p(mu).substitute(&accel)?;
        if let Some(j) = p_mu
            .vars()
            .into_iter()
            .find(|v| matches!(v, CanonicalVar::J(..)))
        {
            return Err(ConstraintError::JetLeak(format!(
                "p{mu} = {p_mu} contains {j}"
            )));
        }
        if !p_mu.any_var(is_accel) {
            let h = &Expr::var(CanonicalVar::P(mu)) - &p_mu;
            constraints.push(ConstraintRecord::primary(mu, Sector::P, h));
        }
        let h = &Expr::var(CanonicalVar::Pi(mu)) - &pi_mu;
        constraints.push(ConstraintRecord::primary(mu, Sector::Pi, h));
    }
    Ok((accel, constraints))
}

/// `H_0 = -L + p_a v_a + pi_a a_a - v_mu H_mu^p - a_mu H_mu^pi` with the
/// regular accelerations eliminated. Singular coordinates whose `p_mu` is
/// not a constraint keep `p_mu v_mu`.
pub fn canonical_hamiltonian(
    model: &LagrangianModel,
    accel: &BTreeMap<CanonicalVar, Expr>,
    momenta: &MomentaSet,
    split: &IndexSplit,
) -> Result<Expr, ConstraintError> {
    let mut h = -model.lagrangian.clone();
    for &a in &split.regular {
        h = &h + &(&Expr::var(CanonicalVar::P(a)) * &Expr::var(CanonicalVar::V(a)));
        h = &h + &(&Expr::var(CanonicalVar::Pi(a)) * &Expr::var(CanonicalVar::A(a)));
    }
    for &mu in &split.singular {
        let p_mu = momenta.p(mu).substitute(accel)?;
        let p_value = if p_mu.any_var(CanonicalVar::is_jet) {
            Expr::var(CanonicalVar::P(mu))
        } else {
            p_mu
        };
        let pi_value = momenta.pi(mu).substitute(accel)?;
        h = &h + &(&Expr::var(CanonicalVar::V(mu)) * &p_value);
        h = &h + &(&Expr::var(CanonicalVar::A(mu)) * &pi_value);
    }
    let h = h.substitute(accel)?;
    if let Some(v) = h.vars().into_iter().find(CanonicalVar::is_jet) {
        return Err(ConstraintError::HamiltonianNotReduced(format!(
            "{v} survives in {h}"
        )));
    }
    Ok(h)
}

/// Runs the full constraint analysis.
pub fn analyze(model: &LagrangianModel) -> Result<AnalysisReport, AnalysisError> {
    let at = |stage: Stage| move |source: ConstraintError| AnalysisError { stage, source };

    let w = hessian(model);
    let split = hessian_rank(&w).map_err(at(Stage::Rank))?;
    let momenta = momenta(model).map_err(at(Stage::Momenta))?;
    let (accel, primaries) =
        primary_constraints(model, &momenta, &split).map_err(at(Stage::PrimaryConstraints))?;
    let h0 =
        canonical_hamiltonian(model, &accel, &momenta, &split).map_err(at(Stage::Hamiltonian))?;
    let h0prime = &Expr::var(CanonicalVar::P0) + &h0;
    let (all, closure_log) =
        constraint_closure(model.n, &h0prime, &primaries).map_err(at(Stage::Closure))?;
    let constraints = classify(&all).map_err(at(Stage::Classification))?;
    Ok(AnalysisReport {
        model: model.clone(),
        hessian: w,
        split,
        accel_solutions: accel,
        momenta,
        h0,
        h0prime,
        constraints,
        closure_log,
    })
}

impl fmt::Display for AnalysisReport {
    /// Plain-text derivation, one tagged line per derived quantity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[model] n = {}", self.model.n)?;
        writeln!(f, "[model] L = {}", self.model.lagrangian)?;
        for (i, row) in self.hessian.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[hessian] W{} = [{}]", i + 1, cells.join(", "))?;
        }
        let list = |idx: &[u32]| {
            idx.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(f, "[rank] rank = {}", self.split.rank)?;
        writeln!(f, "[rank] regular = {{{}}}", list(&self.split.regular))?;
        writeln!(f, "[rank] singular = {{{}}}", list(&self.split.singular))?;
        for i in 1..=self.model.n {
            writeln!(f, "[momenta] pi{i} = {}", self.momenta.pi(i))?;
        }
        for i in 1..=self.model.n {
            writeln!(f, "[momenta] p{i} = {}", self.momenta.p(i))?;
        }
        for (v, e) in &self.accel_solutions {
            writeln!(f, "[accelerations] {v} = {e}")?;
        }
        for c in self.primaries() {
            writeln!(f, "[primary] {} = {} = 0", c.label, c.expr)?;
        }
        writeln!(f, "[hamiltonian] H0 = {}", self.h0)?;
        writeln!(f, "[hamilton-jacobi] H'0 = {}", self.h0prime)?;
        for line in self.closure_log.to_string().lines() {
            writeln!(f, "[closure] {line}")?;
        }
        for c in self
            .constraints
            .iter()
            .filter(|c| c.origin == ConstraintOrigin::Secondary)
        {
            writeln!(f, "[closure] secondary: {} ({})", c.expr, c.label)?;
        }
        if self.constraints.is_empty() {
            writeln!(f, "[constraints] constraints: none")?;
        }
        for c in &self.constraints {
            writeln!(
                f,
                "[classification] {}-class: {} ({})",
                c.class, c.expr, c.label
            )?;
        }
        Ok(())
    }
}
