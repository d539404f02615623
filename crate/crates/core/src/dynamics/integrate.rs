use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{derive_action_form, derive_equations_of_motion, DynamicsError};
use crate::constraints::AnalysisReport;
use crate::expr::{CanonicalVar, Expr};

/// Values of `x_i`, `v_i`, `p_i`, `pi_i` for `i = 1..=n`, stored in that
/// block order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    n: u32,
    values: Vec<f64>,
}

impl PhaseState {
    pub fn zero(n: u32) -> Self {
        PhaseState {
            n,
            values: vec![0.0; 4 * n as usize],
        }
    }

    pub fn from_values(n: u32, values: Vec<f64>) -> Result<Self, DynamicsError> {
        if values.len() != 4 * n as usize {
            return Err(DynamicsError::InvalidConfig(format!(
                "expected {} values, got {}",
                4 * n,
                values.len()
            )));
        }
        Ok(PhaseState { n, values })
    }

    /// Either `x1=0,v1=1,...` (unnamed entries are zero) or `4n` positional
    /// values in the order `x.., v.., p.., pi..`.
    pub fn parse(text: &str, n: u32) -> Result<Self, DynamicsError> {
        let bad = |m: String| DynamicsError::InvalidConfig(m);
        let items: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("'{s}' is not a number")))
        };
        if !items.iter().any(|s| s.contains('=')) {
            let values = items.iter().map(|s| number(s)).collect::<Result<_, _>>()?;
            return Self::from_values(n, values);
        }
        let mut state = PhaseState::zero(n);
        for item in items {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("'{item}' is not a name=value entry")))?;
            let var = crate::parser::parse(name.trim(), n)
                .ok()
                .and_then(|e| e.vars().into_iter().next().filter(|_| e.len() == 1))
                .filter(|v| state.slot(v).is_some())
                .ok_or_else(|| bad(format!("'{}' is not a phase variable", name.trim())))?;
            state.set(&var, number(value)?);
        }
        Ok(state)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn slot(&self, v: &CanonicalVar) -> Option<usize> {
        slot(self.n, v)
    }

    /// Value of a phase variable; `t`, `p0` and jets have no value here.
    pub fn get(&self, v: &CanonicalVar) -> Option<f64> {
        self.slot(v).map(|k| self.values[k])
    }

    pub fn set(&mut self, v: &CanonicalVar, value: f64) {
        let k = self.slot(v).expect("phase variable within range");
        self.values[k] = value;
    }

    pub fn x(&self, i: u32) -> f64 {
        self.values[(i - 1) as usize]
    }

    pub fn v(&self, i: u32) -> f64 {
        self.values[(self.n + i - 1) as usize]
    }

    pub fn p(&self, i: u32) -> f64 {
        self.values[(2 * self.n + i - 1) as usize]
    }

    pub fn pi(&self, i: u32) -> f64 {
        self.values[(3 * self.n + i - 1) as usize]
    }

    /// Evaluates a phase-space expression at this state and time `t`.
    pub fn eval(&self, e: &Expr, t: f64) -> f64 {
        e.eval(|v| match v {
            CanonicalVar::T => t,
            CanonicalVar::P0 => 0.0,
            other => self.get(other).unwrap_or(f64::NAN),
        })
    }
}

fn slot(n: u32, v: &CanonicalVar) -> Option<usize> {
    let (block, i) = match *v {
        CanonicalVar::X(i) => (0, i),
        CanonicalVar::V(i) => (1, i),
        CanonicalVar::P(i) => (2, i),
        CanonicalVar::Pi(i) => (3, i),
        _ => return None,
    };
    (1..=n).contains(&i).then(|| (block * n + i - 1) as usize)
}

/// A polynomial flattened for repeated f64 evaluation over
/// `[phase values.., t]`.
#[derive(Debug, Clone)]
struct Compiled {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(e: &Expr, n: u32) -> Self {
        let t_slot = 4 * n as usize;
        let terms = e
            .terms()
            .filter(|(m, _)| m.exponent(&CanonicalVar::P0) == 0)
            .map(|(m, c)| {
                let factors = m
                    .factors()
                    .iter()
                    .map(|(v, k)| {
                        let s = match v {
                            CanonicalVar::T => t_slot,
                            other => slot(n, other).expect("phase-space expression"),
                        };
                        (s, *k as i32)
                    })
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, vals: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, (s, k)| acc * vals[*s].powi(*k)))
            .sum()
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Prescribed time dependence of one singular coordinate. `None` holds the
/// value fixed at its initial datum.
#[derive(Clone, Default)]
pub struct GaugeFn {
    pub x: Option<RealFn>,
    pub v: Option<RealFn>,
}

impl GaugeFn {
    pub fn new(
        x: impl Fn(f64) -> f64 + Send + Sync + 'static,
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GaugeFn {
            x: Some(Arc::new(x)),
            v: Some(Arc::new(v)),
        }
    }
}

impl fmt::Debug for GaugeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeFn")
            .field("x", &self.x.as_ref().map(|_| "fn"))
            .field("v", &self.v.as_ref().map(|_| "fn"))
            .finish()
    }
}

/// Gauge functions for the singular coordinates; missing entries are held
/// at their initial values.
#[derive(Debug, Clone, Default)]
pub struct GaugeChoice {
    fns: BTreeMap<u32, GaugeFn>,
}

impl GaugeChoice {
    pub fn hold() -> Self {
        Self::default()
    }

    /// `x_mu = v_mu = 0`.
    pub fn zero(singular: &[u32]) -> Self {
        let fns = singular
            .iter()
            .map(|&mu| (mu, GaugeFn::new(|_| 0.0, |_| 0.0)))
            .collect();
        GaugeChoice { fns }
    }

    /// `v_mu = c`, `x_mu` held at its initial value.
    pub fn constant(singular: &[u32], c: f64) -> Self {
        let fns = singular
            .iter()
            .map(|&mu| {
                let v: RealFn = Arc::new(move |_| c);
                (
                    mu,
                    GaugeFn {
                        x: None,
                        v: Some(v),
                    },
                )
            })
            .collect();
        GaugeChoice { fns }
    }

    /// `zero`, `hold` or `constant:<value>`.
    pub fn from_name(name: &str, singular: &[u32]) -> Result<Self, DynamicsError> {
        match name.trim() {
            "zero" => Ok(Self::zero(singular)),
            "hold" => Ok(Self::hold()),
            other => {
                let c = other
                    .strip_prefix("constant:")
                    .and_then(|c| c.trim().parse::<f64>().ok())
                    .ok_or_else(|| {
                        DynamicsError::InvalidConfig(format!("unknown gauge '{other}'"))
                    })?;
                Ok(Self::constant(singular, c))
            }
        }
    }

    pub fn with(mut self, mu: u32, f: GaugeFn) -> Self {
        self.fns.insert(mu, f);
        self
    }

    fn get(&self, mu: u32) -> Option<&GaugeFn> {
        self.fns.get(&mu)
    }
}

/// Fourth-order central difference.
fn derivative(f: &RealFn, t: f64) -> f64 {
    let h = 1e-3 * t.abs().max(1.0);
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: PhaseState,
    /// Action accumulated up to `t`, boundary term included.
    pub action: f64,
    /// Largest absolute constraint value at this sample.
    pub residual_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: u32,
    pub samples: Vec<Sample>,
    /// Closed-form potential of the singular part of the action, when exact.
    pub boundary: Option<Expr>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.residual_max)
            .fold(0.0, f64::max)
    }

    /// Values of `e` at every sample.
    pub fn eval_along(&self, e: &Expr) -> Vec<f64> {
        self.samples.iter().map(|s| s.state.eval(e, s.t)).collect()
    }

    /// Four-point Lagrange interpolation of the state at `t`.
    pub fn state_at(&self, t: f64) -> PhaseState {
        let s = &self.samples;
        if s.len() < 4 {
            let k = s.partition_point(|x| x.t < t).min(s.len() - 1);
            return s[k].state.clone();
        }
        let k = s.partition_point(|x| x.t < t);
        let start = k.saturating_sub(2).min(s.len() - 4);
        let nodes = &s[start..start + 4];
        let mut values = vec![0.0; nodes[0].state.values.len()];
        for (j, nj) in nodes.iter().enumerate() {
            let w: f64 = nodes
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != j)
                .map(|(_, nm)| (t - nm.t) / (nj.t - nm.t))
                .product();
            for (acc, v) in values.iter_mut().zip(&nj.state.values) {
                *acc += w * v;
            }
        }
        PhaseState { n: self.n, values }
    }

    /// `t,x1..,v1..,p1..,pi1..,S,residual_max`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for prefix in ["x", "v", "p", "pi"] {
            for i in 1..=self.n {
                write!(out, ",{prefix}{i}").unwrap();
            }
        }
        out.push_str(",S,residual_max\n");
        for s in &self.samples {
            write!(out, "{}", s.t).unwrap();
            for v in &s.state.values {
                write!(out, ",{v}").unwrap();
            }
            writeln!(out, ",{},{}", s.action, s.residual_max).unwrap();
        }
        out
    }
}

/// Final action of a trajectory, boundary term included.
pub fn action_along(trajectory: &Trajectory) -> f64 {
    trajectory.last().action
}

struct Rate {
    slot: usize,
    sign: f64,
    dt: Compiled,
    dx: Vec<(u32, Compiled)>,
    dv: Vec<(u32, Compiled)>,
}

const INIT_TOLERANCE: f64 = 1e-12;

/// Integrates the equations of motion from `t = 0` to `t_end` with classical
/// RK4 at a uniform step no larger than `dt`. The singular coordinates follow
/// the gauge; the action is carried as an extra RK4 component.
pub fn integrate(
    report: &AnalysisReport,
    gauge: &GaugeChoice,
    init: &PhaseState,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, DynamicsError> {
    let n = report.n();
    if init.n != n {
        return Err(DynamicsError::InvalidConfig(format!(
            "initial state has {} coordinates, model has {n}",
            init.n
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidConfig(
            "dt and tEnd must be positive".into(),
        ));
    }
    let singular = report.singular_idx().to_vec();
    let comp = |e: &Expr| Compiled::new(e, n);
    let rates: Vec<Rate> = derive_equations_of_motion(report)
        .iter()
        .map(|q| Rate {
            slot: slot(n, &q.target).expect("phase-space target"),
            sign: f64::from(q.sign),
            dt: comp(&q.dt_coeff),
            dx: q.dx_mu_coeff.iter().map(|(m, e)| (*m, comp(e))).collect(),
            dv: q.dv_mu_coeff.iter().map(|(m, e)| (*m, comp(e))).collect(),
        })
        .collect();
    let (_, action) = derive_action_form(report);
    let boundary = action.mu_potential(&singular);
    let action_dt = comp(&action.dt_coeff);
    let action_mu: Vec<(usize, Compiled)> = if boundary.is_some() {
        Vec::new()
    } else {
        let dx = action.dx_mu_coeff.iter().map(|(m, e)| (*m, 0usize, e));
        let dv = action.dv_mu_coeff.iter().map(|(m, e)| (*m, 1usize, e));
        dx.chain(dv)
            .map(|(m, block, e)| (block * n as usize + (m - 1) as usize, comp(e)))
            .collect()
    };
    let boundary_c = boundary.as_ref().map(comp);
    let constraints: Vec<(String, Compiled)> = report
        .constraints
        .iter()
        .map(|c| (c.label.clone(), comp(&c.expr)))
        .collect();

    let dim = 4 * n as usize;
    // Gauge-driven slots with their functions.
    let mut driven: Vec<(usize, RealFn)> = Vec::new();
    for &mu in &singular {
        if let Some(g) = gauge.get(mu) {
            if let Some(f) = &g.x {
                driven.push(((mu - 1) as usize, f.clone()));
            }
            if let Some(f) = &g.v {
                driven.push(((n + mu - 1) as usize, f.clone()));
            }
        }
    }
    let apply_gauge = |vals: &mut [f64], t: f64| {
        for (s, f) in &driven {
            vals[*s] = f(t);
        }
    };
    let residual = |vals: &[f64]| {
        constraints
            .iter()
            .map(|(_, c)| c.eval(vals).abs())
            .fold(0.0, f64::max)
    };

    let mut y = init.values.clone();
    y.push(0.0);
    apply_gauge(&mut y, 0.0);
    for (label, c) in &constraints {
        let r = c.eval(&y).abs();
        if !(r <= INIT_TOLERANCE) {
            return Err(DynamicsError::ConstraintViolation {
                label: label.clone(),
                residual: r,
            });
        }
    }

    // d/dt of [phase.., S-integrand] at (t, y); y[dim] holds t on entry.
    let deriv = |t: f64, y: &[f64], s_rate: &mut f64, out: &mut [f64]| {
        let mut vals = y.to_vec();
        vals[dim] = t;
        apply_gauge(&mut vals, t);
        let mut speed = vec![0.0; dim];
        for (s, f) in &driven {
            speed[*s] = derivative(f, t);
        }
        out.iter_mut().for_each(|o| *o = 0.0);
        for r in &rates {
            let mut rate = r.dt.eval(&vals);
            for (mu, c) in &r.dx {
                rate += c.eval(&vals) * speed[(mu - 1) as usize];
            }
            for (mu, c) in &r.dv {
                rate += c.eval(&vals) * speed[(n + mu - 1) as usize];
            }
            out[r.slot] = r.sign * rate;
        }
        let mut ds = action_dt.eval(&vals);
        for (s, c) in &action_mu {
            ds += c.eval(&vals) * speed[*s];
        }
        *s_rate = ds;
    };

    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut s_int = 0.0;
    let mut samples = Vec::with_capacity(steps + 1);
    let sample = |t: f64, y: &[f64], s_int: f64| {
        let mut vals = y.to_vec();
        vals[dim] = t;
        let b = boundary_c.as_ref().map_or(0.0, |c| c.eval(&vals));
        Sample {
            t,
            state: PhaseState {
                n,
                values: y[..dim].to_vec(),
            },
            action: s_int + b,
            residual_max: residual(&vals),
        }
    };
    samples.push(sample(0.0, &y, 0.0));

    let mut k = [
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    ];
    let mut ks = [0.0; 4];
    let mut tmp = vec![0.0; dim + 1];
    for step in 0..steps {
        let t = step as f64 * h;
        deriv(t, &y, &mut ks[0], &mut k[0]);
        for stage in 1..4 {
            let c = if stage == 3 { 1.0 } else { 0.5 };
            for j in 0..dim {
                tmp[j] = y[j] + c * h * k[stage - 1][j];
            }
            deriv(t + c * h, &tmp, &mut ks[stage], &mut k[stage]);
        }
        for j in 0..dim {
            y[j] += h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]);
        }
        s_int += h / 6.0 * (ks[0] + 2.0 * ks[1] + 2.0 * ks[2] + ks[3]);
        let t_next = if step + 1 == steps {
            t_end
        } else {
            (step + 1) as f64 * h
        };
        apply_gauge(&mut y, t_next);
        if y[..dim].iter().any(|v| !v.is_finite()) || !s_int.is_finite() {
            return Err(DynamicsError::NumericalBlowup { t: t_next });
        }
        samples.push(sample(t_next, &y, s_int));
    }
    Ok(Trajectory {
        n,
        samples,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{analyze, LagrangianModel};
    use crate::parser::parse;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const FIXTURE: &str = "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3";

    fn report() -> AnalysisReport {
        analyze(&LagrangianModel::new(3, parse(FIXTURE, 3).unwrap()).unwrap()).unwrap()
    }

    fn cos_init() -> PhaseState {
        PhaseState::parse("x1=0, v1=1, p1=0, pi1=0", 3).unwrap()
    }

    fn run(t_end: f64, dt: f64) -> Trajectory {
        let r = report();
        integrate(
            &r,
            &GaugeChoice::zero(r.singular_idx()),
            &cos_init(),
            dt,
            t_end,
        )
        .unwrap()
    }

    #[test]
    fn parse_states() {
        let s = PhaseState::parse("x1=0.5, pi3=2", 3).unwrap();
        assert_eq!((s.x(1), s.pi(3), s.v(2)), (0.5, 2.0, 0.0));
        let s = PhaseState::parse("1,2,3,4", 1).unwrap();
        assert_eq!((s.x(1), s.v(1), s.p(1), s.pi(1)), (1.0, 2.0, 3.0, 4.0));
        assert!(PhaseState::parse("1,2,3", 1).is_err());
        assert!(PhaseState::parse("a1=1", 1).is_err());
        assert!(PhaseState::parse("x2=1", 1).is_err());
        assert!(PhaseState::parse("x1=abc", 1).is_err());
    }

    #[test]
    fn cos_trajectory() {
        let tr = run(FRAC_PI_2, 1e-3);
        let end = &tr.last().state;
        assert!(end.v(1).abs() < 1e-8, "{}", end.v(1));
        assert!((end.pi(1) + 1.0).abs() < 1e-8, "{}", end.pi(1));
        assert!((end.x(1) - 1.0).abs() < 1e-8);
        assert!(tr.samples.iter().all(|s| s.state.p(1) == 0.0));
        assert!(action_along(&tr).abs() < 1e-6);
    }

    #[test]
    fn cos_action_quarter_period() {
        let tr = run(FRAC_PI_4, 1e-3);
        assert!(
            (action_along(&tr) + 0.25).abs() < 1e-6,
            "{}",
            action_along(&tr)
        );
    }

    #[test]
    fn hamiltonian_conserved_and_constraints_hold() {
        let r = report();
        let tr = run(2.0 * PI, 1e-3);
        let h = tr.eval_along(&r.h0);
        let drift = h.iter().map(|x| (x - h[0]).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "{drift}");
        assert!(tr.max_residual() < 1e-9);
        for s in &tr.samples {
            assert_eq!((s.state.p(2), s.state.p(3)), (0.0, 0.0));
        }
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let r = report();
        let tr = integrate(
            &r,
            &GaugeChoice::zero(&[3]),
            &PhaseState::zero(3),
            1e-2,
            1.0,
        )
        .unwrap();
        assert!(tr
            .samples
            .iter()
            .all(|s| s.state.values().iter().all(|v| *v == 0.0)));
        assert_eq!(action_along(&tr), 0.0);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |dt: f64| (run(1.0, dt).last().state.v(1) - 1f64.cos()).abs();
        let ratio = err(0.1) / err(0.05);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn gauge_does_not_touch_regular_sector() {
        let r = report();
        let a = integrate(&r, &GaugeChoice::zero(&[3]), &cos_init(), 1e-2, 2.0).unwrap();
        let mut init = cos_init();
        init.set(&CanonicalVar::Pi(3), 0.5);
        let b = integrate(&r, &GaugeChoice::constant(&[3], 0.5), &init, 1e-2, 2.0).unwrap();
        let moving = GaugeChoice::hold().with(3, GaugeFn::new(|_| 0.0, |t| t.sin()));
        let c = integrate(&r, &moving, &cos_init(), 1e-2, 2.0).unwrap();
        for other in [&b, &c] {
            for (sa, sb) in a.samples.iter().zip(&other.samples) {
                for i in 1..=2 {
                    assert_eq!(sa.state.x(i).to_bits(), sb.state.x(i).to_bits());
                    assert_eq!(sa.state.v(i).to_bits(), sb.state.v(i).to_bits());
                    assert_eq!(sa.state.pi(i).to_bits(), sb.state.pi(i).to_bits());
                }
            }
        }
        // pi3 follows v3 through dpi3 = dv3; the boundary term is 1/2 v3^2.
        let end = c.last();
        assert!((end.state.pi(3) - 2f64.sin()).abs() < 1e-9);
        assert!(c.max_residual() < 1e-9);
        assert!((end.action - a.last().action - 0.5 * 2f64.sin().powi(2)).abs() < 1e-12);
        assert!((b.last().action - a.last().action - 0.125).abs() < 1e-12);
    }

    #[test]
    fn off_surface_initial_data_rejected() {
        let r = report();
        let init = PhaseState::parse("x3=1", 3).unwrap();
        let err = integrate(&r, &GaugeChoice::hold(), &init, 1e-2, 1.0).unwrap_err();
        assert!(matches!(err, DynamicsError::ConstraintViolation { .. }));
        let init = PhaseState::parse("pi3=1", 3).unwrap();
        assert!(integrate(&r, &GaugeChoice::zero(&[3]), &init, 1e-2, 1.0).is_err());
    }

    #[test]
    fn blowup_detected() {
        let m = LagrangianModel::new(1, parse("1/2*a1^2 + 1/4*x1^4", 1).unwrap()).unwrap();
        let r = analyze(&m).unwrap();
        let init = PhaseState::parse("x1=10, v1=10", 1).unwrap();
        let err = integrate(&r, &GaugeChoice::hold(), &init, 0.5, 50.0).unwrap_err();
        assert!(matches!(err, DynamicsError::NumericalBlowup { .. }));
    }

    #[test]
    fn interpolation_and_csv() {
        let tr = run(1.0, 1e-2);
        let s = tr.state_at(0.333);
        assert!((s.v(1) - 0.333f64.cos()).abs() < 1e-8);
        let csv = tr.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "t,x1,x2,x3,v1,v2,v3,p1,p2,p3,pi1,pi2,pi3,S,residual_max"
        );
        assert_eq!(csv.lines().count(), tr.samples.len() + 1);
    }

    #[test]
    fn bad_config() {
        let r = report();
        let g = GaugeChoice::zero(&[3]);
        assert!(integrate(&r, &g, &PhaseState::zero(3), 0.0, 1.0).is_err());
        assert!(integrate(&r, &g, &PhaseState::zero(2), 0.1, 1.0).is_err());
        assert!(GaugeChoice::from_name("wiggle", &[3]).is_err());
        assert!(GaugeChoice::from_name("constant:2.5", &[3]).is_ok());
    }
}
