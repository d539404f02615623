//! Discretized reduced-phase-space path integral.
//!
//! The reduced action density `-H_0 + p_a dH_0/dp_a + pi_a dH_0/dpi_a` is
//! turned into a configuration-space density by eliminating `pi_a` through
//! the velocity equation `dv_a/dt = dH_0/dpi_a`. On a grid of `M` slices the
//! action becomes
//!
//! ```text
//! S = sum_k dt * l(v_k, (v_{k+1} - v_k)/dt, t_k)
//! ```
//!
//! (left rectangle rule, forward differences). For quadratic densities the
//! integral over interior nodes is Gaussian and evaluated in closed form;
//! [`oracle`] provides an independent quadrature for cross-checking.
//!
//! Singular coordinates are held at zero (the zero gauge) and unselected
//! regular coordinates at `v = 0`. The kernel is normalized so that a grid
//! without interior nodes yields `exp(i S)`.

pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::constraints::AnalysisReport;
use crate::dynamics::{derive_action_form, Trajectory};
use crate::expr::{CanonicalVar, Expr, Monomial, Poly, Rational, Variable};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("invalid grid: {0}")]
    GridError(String),
    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),
    #[error("quadratic form is degenerate (caustic or degenerate boundary data)")]
    DegenerateQuadraticForm,
    #[error("quadrature oracle failed: {0}")]
    Oracle(String),
}

/// Node value `v_coord` at grid index `node`, or the momentum `pi` there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeVar {
    V { coord: u32, node: usize },
    Pi { coord: u32, node: usize },
}

impl fmt::Display for NodeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeVar::V { coord, node } => write!(f, "v{coord}[{node}]"),
            NodeVar::Pi { coord, node } => write!(f, "pi{coord}[{node}]"),
        }
    }
}

impl Variable for NodeVar {}

/// Variables of one slice `[t_k, t_{k+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SliceVar {
    Left(u32),
    Right(u32),
    Time,
}

impl fmt::Display for SliceVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceVar::Left(a) => write!(f, "v{a}"),
            SliceVar::Right(a) => write!(f, "v{a}'"),
            SliceVar::Time => f.write_str("t"),
        }
    }
}

impl Variable for SliceVar {}

/// Time grid with node values for the selected regular coordinates. The
/// first and last node of every coordinate are the boundary data.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub slices: usize,
    pub coords: Vec<u32>,
    /// `nodes[c][k]` is `v_{coords[c]}` at `t_k`, `k = 0..=slices`.
    pub nodes: Vec<Vec<f64>>,
}

impl PathGrid {
    /// Straight-line interior between the boundary values.
    pub fn new(
        t_start: f64,
        t_end: f64,
        slices: usize,
        coords: Vec<u32>,
        start: &[f64],
        end: &[f64],
    ) -> Result<Self, KernelError> {
        if start.len() != coords.len() || end.len() != coords.len() {
            return Err(KernelError::GridError(
                "one boundary value per coordinate".into(),
            ));
        }
        let nodes = start
            .iter()
            .zip(end)
            .map(|(a, b)| {
                (0..=slices)
                    .map(|k| a + (b - a) * k as f64 / slices.max(1) as f64)
                    .collect()
            })
            .collect();
        let grid = PathGrid {
            t_start,
            t_end,
            slices,
            coords,
            nodes,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Node values taken from a trajectory starting at `t = 0`.
    pub fn from_trajectory(
        trajectory: &Trajectory,
        t_end: f64,
        slices: usize,
        coords: Vec<u32>,
    ) -> Result<Self, KernelError> {
        let mut grid = PathGrid::new(
            0.0,
            t_end,
            slices,
            coords.clone(),
            &vec![0.0; coords.len()],
            &vec![0.0; coords.len()],
        )?;
        for k in 0..=slices {
            let state = trajectory.state_at(grid.time(k));
            for (c, &a) in coords.iter().enumerate() {
                grid.nodes[c][k] = state.v(a);
            }
        }
        Ok(grid)
    }

    fn validate(&self) -> Result<(), KernelError> {
        if self.slices < 1 {
            return Err(KernelError::GridError(
                "at least one slice is required".into(),
            ));
        }
        if !(self.t_end > self.t_start) {
            return Err(KernelError::GridError("tEnd must exceed tStart".into()));
        }
        if self.coords.is_empty() {
            return Err(KernelError::GridError("no coordinates selected".into()));
        }
        if self.nodes.len() != self.coords.len()
            || self.nodes.iter().any(|n| n.len() != self.slices + 1)
        {
            return Err(KernelError::GridError(
                "node table does not match the grid".into(),
            ));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.slices as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.slices {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    /// Number of integration variables.
    pub fn interior_len(&self) -> usize {
        self.coords.len() * (self.slices - 1)
    }

    /// Interior node values, coordinate-major.
    pub fn interior(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .flat_map(|n| n[1..self.slices].iter().copied())
            .collect()
    }

    pub fn set_interior(&mut self, z: &[f64]) {
        assert_eq!(z.len(), self.interior_len());
        let m = self.slices - 1;
        for (c, nodes) in self.nodes.iter_mut().enumerate() {
            nodes[1..self.slices].copy_from_slice(&z[c * m..(c + 1) * m]);
        }
    }

    fn interior_var(&self, i: usize) -> NodeVar {
        let m = self.slices - 1;
        NodeVar::V {
            coord: self.coords[i / m],
            node: i % m + 1,
        }
    }
}

/// `S = 1/2 z^T Q z + b^T z + c` over the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticActionMatrix {
    pub q: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: f64,
}

type FloatPoly<V> = Vec<(f64, Vec<(V, u32)>)>;

fn to_float<V: Variable + Copy>(p: &Poly<V>) -> FloatPoly<V> {
    p.terms()
        .map(|(m, c)| (c.to_f64().unwrap_or(f64::NAN), m.factors().to_vec()))
        .collect()
}

fn eval_float<V: Copy, T>(p: &FloatPoly<V>, mut value: impl FnMut(V) -> T) -> T
where
    T: Copy + num_traits::Zero + std::ops::Mul<Output = T> + From<f64> + num_traits::One,
{
    p.iter().fold(T::zero(), |acc, (c, fs)| {
        let term = fs.iter().fold(T::from(*c), |t, (v, e)| {
            t * num_traits::pow(value(*v), *e as usize)
        });
        acc + term
    })
}

/// The discretized action of a model on a grid shape.
#[derive(Debug, Clone)]
pub struct DiscreteAction {
    t_start: f64,
    t_end: f64,
    slices: usize,
    coords: Vec<u32>,
    dt_exact: Rational,
    /// `dt * l` on one slice, over `Left`, `Right` and `Time`.
    slice: Poly<SliceVar>,
    slice_f: FloatPoly<SliceVar>,
    d_left: Vec<FloatPoly<SliceVar>>,
    d_right: Vec<FloatPoly<SliceVar>>,
}

/// Density pieces after fixing the gauge and unselected coordinates.
struct Reduced {
    regular: Vec<u32>,
    /// Action density over `v_a`, `pi_a`, `t`.
    density: Expr,
    /// `B` and `r` of `dv_a/dt = B pi + r(v, t)`.
    b: linalg::RatMatrix,
    r: Vec<Expr>,
    /// Reduced `H_0` with `p = 0`.
    hamiltonian: Expr,
}

fn reduce_model(report: &AnalysisReport, coords: &[u32]) -> Result<Reduced, KernelError> {
    let unsupported = |m: String| KernelError::UnsupportedKernel(m);
    let regular = report.regular_idx().to_vec();
    if let Some(c) = coords.iter().find(|c| !regular.contains(c)) {
        return Err(KernelError::GridError(format!(
            "coordinate {c} is not regular"
        )));
    }
    let mut zero: BTreeMap<CanonicalVar, Expr> = BTreeMap::new();
    for &mu in report.singular_idx() {
        for v in [
            CanonicalVar::X(mu),
            CanonicalVar::V(mu),
            CanonicalVar::P(mu),
            CanonicalVar::Pi(mu),
        ] {
            zero.insert(v, Expr::zero());
        }
    }
    for &b in &regular {
        if !coords.contains(&b) {
            zero.insert(CanonicalVar::X(b), Expr::zero());
            zero.insert(CanonicalVar::V(b), Expr::zero());
        }
    }
    let sub = |e: &Expr| e.substitute(&zero).expect("zero rules are closed");
    let (_, form) = derive_action_form(report);
    let density = sub(&form.dt_coeff);
    let h = sub(&report.second_class_rules().reduce(&report.h0));

    let allowed = |v: &CanonicalVar| {
        matches!(
            v,
            CanonicalVar::T | CanonicalVar::V(_) | CanonicalVar::Pi(_)
        )
    };
    if let Some(v) = density.vars().into_iter().find(|v| !allowed(v)) {
        return Err(unsupported(format!(
            "reduced action density depends on {v}; only v, pi and t are supported"
        )));
    }
    let p_free: BTreeMap<CanonicalVar, Expr> = regular
        .iter()
        .map(|&a| (CanonicalVar::P(a), Expr::zero()))
        .collect();
    let hamiltonian = h.substitute(&p_free).expect("momentum rules are closed");

    let mut b = Vec::new();
    let mut r = Vec::new();
    let no_pi: BTreeMap<CanonicalVar, Expr> = regular
        .iter()
        .map(|&a| (CanonicalVar::Pi(a), Expr::zero()))
        .collect();
    for &a in &regular {
        let g = h.diff(&CanonicalVar::Pi(a));
        let row: Vec<Rational> = regular
            .iter()
            .map(|&c| {
                g.diff(&CanonicalVar::Pi(c)).as_constant().ok_or_else(|| {
                    unsupported(format!(
                        "velocity equation of v{a} is not linear in the momenta"
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        let rest = g.substitute(&no_pi).expect("momentum rules are closed");
        if let Some(v) = rest.vars().into_iter().find(|v| !allowed(v)) {
            return Err(unsupported(format!(
                "velocity equation of v{a} depends on {v}"
            )));
        }
        b.push(row);
        r.push(rest);
    }
    Ok(Reduced {
        regular,
        density,
        b,
        r,
        hamiltonian,
    })
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite grid data")
}

/// Discretizes the reduced action on the shape of `grid`.
pub fn discretize_action(
    report: &AnalysisReport,
    grid: &PathGrid,
) -> Result<DiscreteAction, KernelError> {
    grid.validate()?;
    let red = reduce_model(report, &grid.coords)?;
    let inv = linalg::inverse(&red.b).ok_or_else(|| {
        KernelError::UnsupportedKernel("velocity equations cannot be solved for the momenta".into())
    })?;
    let dt = exact(grid.dt());
    let inv_dt = Rational::one() / &dt;
    let local = |v: &CanonicalVar| -> Poly<SliceVar> {
        match *v {
            CanonicalVar::V(a) => Poly::var(SliceVar::Left(a)),
            CanonicalVar::T => Poly::var(SliceVar::Time),
            _ => unreachable!("checked by reduce_model"),
        }
    };
    // pi* = B^-1 (w - r), w the forward difference of v.
    let w_minus_r: Vec<Poly<SliceVar>> = red
        .regular
        .iter()
        .zip(&red.r)
        .map(|(&a, r)| {
            let w = if grid.coords.contains(&a) {
                (&Poly::var(SliceVar::Right(a)) - &Poly::var(SliceVar::Left(a))).scale(&inv_dt)
            } else {
                Poly::zero()
            };
            &w - &r.compose(local)
        })
        .collect();
    let pi_star: BTreeMap<u32, Poly<SliceVar>> = red
        .regular
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let p = w_minus_r
                .iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (k, e)| &acc + &e.scale(&inv[i][k]));
            (a, p)
        })
        .collect();
    let slice = red
        .density
        .compose(|v| match *v {
            CanonicalVar::Pi(a) => pi_star[&a].clone(),
            other => local(&other),
        })
        .scale(&dt);
    let slice_f = to_float(&slice);
    let d_left = grid
        .coords
        .iter()
        .map(|&a| to_float(&slice.diff(&SliceVar::Left(a))))
        .collect();
    let d_right = grid
        .coords
        .iter()
        .map(|&a| to_float(&slice.diff(&SliceVar::Right(a))))
        .collect();
    Ok(DiscreteAction {
        t_start: grid.t_start,
        t_end: grid.t_end,
        slices: grid.slices,
        coords: grid.coords.clone(),
        dt_exact: dt,
        slice,
        slice_f,
        d_left,
        d_right,
    })
}

impl DiscreteAction {
    fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * (self.t_end - self.t_start) / self.slices as f64
    }

    fn check(&self, grid: &PathGrid) {
        assert!(
            grid.slices == self.slices && grid.coords == self.coords,
            "grid shape differs from the discretization"
        );
    }

    fn eval_generic<T>(&self, nodes: &[Vec<T>]) -> T
    where
        T: Copy + Zero + One + std::ops::Mul<Output = T> + From<f64>,
    {
        let c = |a: u32| {
            self.coords
                .iter()
                .position(|&x| x == a)
                .expect("selected coordinate")
        };
        (0..self.slices).fold(T::zero(), |acc, k| {
            let t = self.time(k);
            acc + eval_float(&self.slice_f, |v| match v {
                SliceVar::Left(a) => nodes[c(a)][k],
                SliceVar::Right(a) => nodes[c(a)][k + 1],
                SliceVar::Time => T::from(t),
            })
        })
    }

    /// Action of the path stored in `grid`.
    pub fn value(&self, grid: &PathGrid) -> f64 {
        self.check(grid);
        self.eval_generic(&grid.nodes)
    }

    /// Action at complex node values, `nodes[c][k]` as in [`PathGrid`].
    pub fn value_complex(&self, nodes: &[Vec<Complex64>]) -> Complex64 {
        self.eval_generic(nodes)
    }

    /// `dS/dz` at every interior node, coordinate-major.
    pub fn gradient(&self, grid: &PathGrid) -> Vec<f64> {
        self.check(grid);
        let c = |a: u32| {
            self.coords
                .iter()
                .position(|&x| x == a)
                .expect("selected coordinate")
        };
        let at = |p: &FloatPoly<SliceVar>, k: usize| {
            let t = self.time(k);
            eval_float(p, |v| match v {
                SliceVar::Left(a) => grid.nodes[c(a)][k],
                SliceVar::Right(a) => grid.nodes[c(a)][k + 1],
                SliceVar::Time => t,
            })
        };
        let mut out = Vec::with_capacity(grid.interior_len());
        for ci in 0..self.coords.len() {
            for k in 1..self.slices {
                out.push(at(&self.d_left[ci], k) + at(&self.d_right[ci], k - 1));
            }
        }
        out
    }

    /// Exact action as a polynomial in every node value.
    pub fn polynomial(&self) -> Poly<NodeVar> {
        let mut terms = Vec::new();
        for k in 0..self.slices {
            let t_k = exact(self.t_start) + &self.dt_exact * Rational::from_integer(k.into());
            let p = self.slice.compose(|v| match *v {
                SliceVar::Left(a) => Poly::var(NodeVar::V { coord: a, node: k }),
                SliceVar::Right(a) => Poly::var(NodeVar::V {
                    coord: a,
                    node: k + 1,
                }),
                SliceVar::Time => Poly::constant(t_k.clone()),
            });
            terms.extend(p.terms().map(|(m, c)| (m.clone(), c.clone())));
        }
        Poly::from_terms(terms)
    }

    /// `Q`, `b`, `c` with the boundary data of `grid` plugged in.
    pub fn quadratic_form(&self, grid: &PathGrid) -> Result<QuadraticActionMatrix, KernelError> {
        self.check(grid);
        let n = grid.interior_len();
        let index: BTreeMap<NodeVar, usize> = (0..n).map(|i| (grid.interior_var(i), i)).collect();
        let ci = |a: u32| {
            grid.coords
                .iter()
                .position(|&x| x == a)
                .expect("selected coordinate")
        };
        let s = self.polynomial().compose(|v| match *v {
            NodeVar::V { coord, node } if node == 0 || node == grid.slices => {
                Poly::constant(exact(grid.nodes[ci(coord)][node]))
            }
            other => Poly::var(other),
        });
        if s.degree() > 2 {
            return Err(KernelError::UnsupportedKernel(format!(
                "discretized action has degree {} in the nodes; only quadratic actions integrate in closed form",
                s.degree()
            )));
        }
        let f = |r: Rational| r.to_f64().unwrap_or(f64::NAN);
        let mut q = DMatrix::zeros(n, n);
        let mut b = DVector::zeros(n);
        for (m, c) in s.terms() {
            let fs: Vec<usize> = m
                .factors()
                .iter()
                .flat_map(|(v, e)| std::iter::repeat_n(index[v], *e as usize))
                .collect();
            match fs.as_slice() {
                [] => {}
                [i] => b[*i] = f(c.clone()),
                [i, j] if i == j => q[(*i, *i)] = f(c * Rational::from_integer(2.into())),
                [i, j] => {
                    q[(*i, *j)] = f(c.clone());
                    q[(*j, *i)] = f(c.clone());
                }
                _ => unreachable!("degree checked"),
            }
        }
        let c = f(s.coefficient(&Monomial::one()));
        Ok(QuadraticActionMatrix { q, b, c })
    }
}

/// Largest `|dS/dz|` over interior nodes of the path stored in `grid`.
pub fn stationary_phase_check(action: &DiscreteAction, grid: &PathGrid) -> f64 {
    action
        .gradient(grid)
        .iter()
        .fold(0.0, |m, g| m.max(g.abs()))
}

/// `int exp(i S(z) / hbar) dz` for `S = 1/2 z^T Q z + b^T z + c`:
/// `(2 pi hbar)^(n/2) |det Q|^(-1/2) exp(i pi/4 sgn Q) exp(i (c - 1/2 b^T Q^-1 b) / hbar)`.
pub fn gaussian_kernel_eval(
    qam: &QuadraticActionMatrix,
    hbar: f64,
) -> Result<Complex64, KernelError> {
    let n = qam.b.len();
    let phase = |s: f64| Complex64::from_polar(1.0, s / hbar);
    if n == 0 {
        return Ok(phase(qam.c));
    }
    let eig = SymmetricEigen::new(qam.q.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if scale == 0.0 || eig.eigenvalues.iter().any(|l| l.abs() <= 1e-12 * scale) {
        return Err(KernelError::DegenerateQuadraticForm);
    }
    let signature: i32 = eig
        .eigenvalues
        .iter()
        .map(|l| if *l > 0.0 { 1 } else { -1 })
        .sum();
    let log_det: f64 = eig.eigenvalues.iter().map(|l| l.abs().ln()).sum();
    let x = qam
        .q
        .clone()
        .lu()
        .solve(&qam.b)
        .ok_or(KernelError::DegenerateQuadraticForm)?;
    let stationary = qam.c - 0.5 * qam.b.dot(&x);
    let modulus = (0.5 * (n as f64 * (2.0 * std::f64::consts::PI * hbar).ln() - log_det)).exp();
    let det_phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * f64::from(signature));
    Ok(det_phase * phase(stationary) * modulus)
}

/// Phase-space discretization `sum_k [pi_k (v_{k+1} - v_k) - dt H(v_k, pi_k, t_k)]`
/// with the momenta `p` set to zero, over every regular coordinate's `pi`.
pub fn phase_space_action(
    report: &AnalysisReport,
    grid: &PathGrid,
) -> Result<Poly<NodeVar>, KernelError> {
    grid.validate()?;
    let red = reduce_model(report, &grid.coords)?;
    let dt = exact(grid.dt());
    let mut terms = Vec::new();
    for k in 0..grid.slices {
        let t_k = exact(grid.t_start) + &dt * Rational::from_integer(k.into());
        let h = red.hamiltonian.compose(|v| match *v {
            CanonicalVar::V(a) => Poly::var(NodeVar::V { coord: a, node: k }),
            CanonicalVar::Pi(a) => Poly::var(NodeVar::Pi { coord: a, node: k }),
            CanonicalVar::T => Poly::constant(t_k.clone()),
            other => unreachable!("{other} removed by reduce_model"),
        });
        let mut slice = -h.scale(&dt);
        for &a in &grid.coords {
            let dv = &Poly::var(NodeVar::V {
                coord: a,
                node: k + 1,
            }) - &Poly::var(NodeVar::V { coord: a, node: k });
            slice = &slice + &(&Poly::var(NodeVar::Pi { coord: a, node: k }) * &dv);
        }
        terms.extend(slice.terms().map(|(m, c)| (m.clone(), c.clone())));
    }
    Ok(Poly::from_terms(terms))
}

/// Integrates out the `pi` nodes of a phase-space action that is quadratic
/// in them, by solving the stationarity equations exactly.
pub fn eliminate_momenta(action: &Poly<NodeVar>) -> Result<Poly<NodeVar>, KernelError> {
    let pis: Vec<NodeVar> = action
        .vars()
        .into_iter()
        .filter(|v| matches!(v, NodeVar::Pi { .. }))
        .collect();
    if pis.is_empty() {
        return Ok(action.clone());
    }
    let grad: Vec<Poly<NodeVar>> = pis.iter().map(|p| action.diff(p)).collect();
    let is_pi = |v: &NodeVar| matches!(v, NodeVar::Pi { .. });
    let zero_pi: BTreeMap<NodeVar, Poly<NodeVar>> =
        pis.iter().map(|p| (*p, Poly::zero())).collect();
    let mut a: linalg::RatMatrix = Vec::new();
    let mut rhs = Vec::new();
    for g in &grad {
        if g.degree_in(is_pi) > 1 {
            return Err(KernelError::UnsupportedKernel(
                "action is not quadratic in the momenta".into(),
            ));
        }
        let row = pis
            .iter()
            .map(|p| {
                g.diff(p).as_constant().ok_or_else(|| {
                    KernelError::UnsupportedKernel("momentum Hessian is not constant".into())
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        a.push(row);
        rhs.push(-g.substitute(&zero_pi).expect("closed rules"));
    }
    let inv = linalg::inverse(&a).ok_or(KernelError::DegenerateQuadraticForm)?;
    let solution: BTreeMap<NodeVar, Poly<NodeVar>> = pis
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let s = rhs
                .iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (k, r)| &acc + &r.scale(&inv[i][k]));
            (*p, s)
        })
        .collect();
    Ok(action
        .substitute(&solution)
        .expect("solution is free of momenta"))
}
