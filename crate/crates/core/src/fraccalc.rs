//! Numerical fractional derivatives: conformal and Riemann-Liouville.
//!
//! These operators give the order `alpha` a numeric meaning; the symbolic
//! engine never does.

use std::f64::consts::PI;

use crate::quadrature::{fd_weights, GaussLegendre};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FracError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("invalid order {0}")]
    InvalidOrder(f64),
}

/// A real function together with the closed interval it may be sampled on.
pub struct SampledFunction<F> {
    eval: F,
    a: f64,
    b: f64,
}

impl<F: Fn(f64) -> f64> SampledFunction<F> {
    pub fn new(eval: F, a: f64, b: f64) -> Result<Self, FracError> {
        if !(b > a) {
            return Err(FracError::DomainError(format!("empty interval [{a}, {b}]")));
        }
        Ok(SampledFunction { eval, a, b })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Fractional order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(FracError::InvalidOrder(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ceil(alpha)`; for non-integer orders the `n` with `n - 1 < alpha < n`.
    pub fn ceil(self) -> usize {
        self.0.ceil() as usize
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }
}

/// Euler gamma function, Lanczos approximation (g = 7, 9 coefficients).
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

const CONFORMAL_LEVELS: usize = 13;
const CONFORMAL_RTOL: f64 = 1e-6;

/// Conformal derivative `lim (f(t + eps t^(1-alpha)) - f(t)) / eps`,
/// evaluated on `eps_k = 2^-k t^alpha / 8` with two Richardson levels.
pub fn conformal_derivative<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: FracOrder,
    t: f64,
) -> Result<f64, FracError> {
    let alpha = alpha.value();
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FracError::InvalidOrder(alpha));
    }
    if t <= 0.0 {
        return Err(FracError::DomainError(format!(
            "conformal derivative needs t > 0, got {t}"
        )));
    }
    let stretch = t.powf(1.0 - alpha);
    let eps0 = t.powf(alpha) / 8.0;
    if t + eps0 * stretch > f.b || t < f.a {
        return Err(FracError::DomainError(format!(
            "t = {t} with its forward step leaves [{}, {}]",
            f.a, f.b
        )));
    }
    let ft = f.eval(t);
    let quotients: Vec<f64> = (0..CONFORMAL_LEVELS)
        .map(|k| {
            let eps = eps0 / f64::powi(2.0, k as i32);
            (f.eval(t + eps * stretch) - ft) / eps
        })
        .collect();
    let first: Vec<f64> = quotients.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let second: Vec<f64> = first
        .windows(2)
        .map(|w| (4.0 * w[1] - w[0]) / 3.0)
        .collect();
    let (prev, last) = (second[second.len() - 2], second[second.len() - 1]);
    let spread = (last - prev).abs();
    if !last.is_finite()
        || spread > CONFORMAL_RTOL * last.abs().max(f64::MIN_POSITIVE) && spread > 1e-14
    {
        return Err(FracError::NoConvergence(format!(
            "extrapolants {prev} and {last} differ by {spread:e}"
        )));
    }
    Ok(last)
}

const QUAD_POINTS: usize = 64;
const STENCIL: usize = 7;

/// Which end of the interval the memory integral is anchored to.
#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

/// Left Riemann-Liouville derivative of order `alpha` with base point `a`.
pub fn rl_left_derivative<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: FracOrder,
    a: f64,
    t: f64,
) -> Result<f64, FracError> {
    if t <= a {
        return Err(FracError::DomainError(format!(
            "need t > a, got t = {t}, a = {a}"
        )));
    }
    if a < f.a || t > f.b {
        return Err(FracError::DomainError(format!(
            "[{a}, {t}] is not inside [{}, {}]",
            f.a, f.b
        )));
    }
    riemann_liouville(f, alpha, a, t, Side::Left)
}

/// Right Riemann-Liouville derivative of order `alpha` with end point `b`.
pub fn rl_right_derivative<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: FracOrder,
    b: f64,
    t: f64,
) -> Result<f64, FracError> {
    if t >= b {
        return Err(FracError::DomainError(format!(
            "need t < b, got t = {t}, b = {b}"
        )));
    }
    if t < f.a || b > f.b {
        return Err(FracError::DomainError(format!(
            "[{t}, {b}] is not inside [{}, {}]",
            f.a, f.b
        )));
    }
    riemann_liouville(f, alpha, b, t, Side::Right)
}

fn riemann_liouville<F: Fn(f64) -> f64>(
    f: &SampledFunction<F>,
    alpha: FracOrder,
    anchor: f64,
    t: f64,
    side: Side,
) -> Result<f64, FracError> {
    let n = alpha.ceil();
    let sign = match side {
        Side::Left => 1.0,
        Side::Right => (-1.0f64).powi(n as i32),
    };
    // Stencil may not cross the anchor (where the integral is not smooth)
    // and may not leave the sampled interval on the other side.
    let (lo, hi) = match side {
        Side::Left => (anchor, f.b),
        Side::Right => (f.a, anchor),
    };
    let dist = (t - anchor).abs();
    let h = 1e-2_f64.min(dist / (STENCIL as f64 + 1.0));

    if alpha.is_integer() {
        let d = nth_derivative(|s| f.eval(s), t, h, n, f.a, f.b);
        return finite(sign * d);
    }

    let beta = n as f64 - alpha.value();
    let gl = GaussLegendre::new(QUAD_POINTS);
    // u = |s - tau|^beta removes the weak singularity of the kernel.
    let memory = |s: f64| -> f64 {
        let upper = (s - anchor).abs().powf(beta);
        let inner = gl.integrate(0.0, upper, |u| {
            let offset = u.powf(1.0 / beta);
            match side {
                Side::Left => f.eval(s - offset),
                Side::Right => f.eval(s + offset),
            }
        });
        inner / beta
    };
    let d = nth_derivative(memory, t, h, n, lo, hi);
    finite(sign * d / gamma(beta))
}

fn finite(v: f64) -> Result<f64, FracError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(FracError::NoConvergence(format!("non-finite result {v}")))
    }
}

/// `order`-th derivative at `t` from a `STENCIL`-point stencil of spacing
/// `h`, centred when it fits in [lo, hi] and shifted inwards otherwise.
fn nth_derivative(g: impl Fn(f64) -> f64, t: f64, h: f64, order: usize, lo: f64, hi: f64) -> f64 {
    let half = (STENCIL / 2) as i64;
    let mut first = -half;
    while first < 0 && t + first as f64 * h < lo {
        first += 1;
    }
    let mut last = first + STENCIL as i64 - 1;
    while last > 0 && t + last as f64 * h > hi {
        first -= 1;
        last -= 1;
    }
    let offsets: Vec<f64> = (first..=last).map(|k| k as f64 * h).collect();
    let weights = fd_weights(0.0, &offsets, order);
    offsets
        .iter()
        .zip(weights)
        .map(|(dx, w)| w * g(t + dx))
        .sum()
}

/// Central finite-difference first derivative (7-point), used as the
/// classical reference for integer orders.
pub fn central_difference(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let offsets: Vec<f64> = (-3..=3).map(|k| k as f64 * h).collect();
    let weights = fd_weights(0.0, &offsets, 1);
    offsets
        .iter()
        .zip(weights)
        .map(|(dx, w)| w * f(t + dx))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(f: impl Fn(f64) -> f64, a: f64, b: f64) -> SampledFunction<impl Fn(f64) -> f64> {
        SampledFunction::new(f, a, b).unwrap()
    }

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn gamma_matches_known_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn conformal_of_square() {
        let f = sf(|t| t * t, 0.0, 4.0);
        let d = conformal_derivative(&f, order(0.5), 1.0).unwrap();
        assert!((d - 2.0).abs() < 1e-4, "{d}");
        let d = conformal_derivative(&f, order(1.0), 1.5).unwrap();
        assert!((d - 3.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn conformal_of_constant_is_zero() {
        let f = sf(|_| 4.2, 0.0, 10.0);
        for (alpha, t) in [(0.3, 0.5), (0.9, 2.0), (1.0, 1.0)] {
            assert_eq!(conformal_derivative(&f, order(alpha), t).unwrap(), 0.0);
        }
    }

    #[test]
    fn conformal_domain_errors() {
        let f = sf(|t| t, 0.0, 10.0);
        assert!(matches!(
            conformal_derivative(&f, order(0.5), 0.0),
            Err(FracError::DomainError(_))
        ));
        assert!(matches!(
            conformal_derivative(&f, order(1.5), 1.0),
            Err(FracError::InvalidOrder(_))
        ));
    }

    #[test]
    fn conformal_reports_divergence() {
        let f = sf(
            |t| {
                if t > 1.0 {
                    (1.0 / (t - 1.0)).sin()
                } else {
                    0.0
                }
            },
            0.0,
            10.0,
        );
        assert!(matches!(
            conformal_derivative(&f, order(0.5), 1.0),
            Err(FracError::NoConvergence(_))
        ));
    }

    #[test]
    fn rl_left_closed_forms() {
        let one = sf(|_| 1.0, 0.0, 2.0);
        let d = rl_left_derivative(&one, order(0.5), 0.0, 1.0).unwrap();
        assert!((d - 1.0 / PI.sqrt()).abs() < 1e-6, "{d}");
        let lin = sf(|t| t, 0.0, 2.0);
        let d = rl_left_derivative(&lin, order(0.5), 0.0, 1.0).unwrap();
        assert!((d - 2.0 / PI.sqrt()).abs() < 1e-6, "{d}");
    }

    #[test]
    fn rl_left_order_between_one_and_two() {
        // D^1.5 t^2 = Gamma(3) / Gamma(1.5) t^0.5
        let f = sf(|t| t * t, 0.0, 3.0);
        let d = rl_left_derivative(&f, order(1.5), 0.0, 2.0).unwrap();
        let exact = 2.0 / gamma(1.5) * 2f64.sqrt();
        assert!((d - exact).abs() < 1e-6, "{d} vs {exact}");
    }

    #[test]
    fn rl_left_at_right_end_of_domain() {
        let f = sf(|_| 1.0, 0.0, 1.0);
        let d = rl_left_derivative(&f, order(0.5), 0.0, 1.0).unwrap();
        assert!((d - 1.0 / PI.sqrt()).abs() < 1e-6, "{d}");
    }

    #[test]
    fn rl_integer_order_is_classical() {
        let f = sf(|t: f64| t.sin() + t * t, -1.0, 3.0);
        let d = rl_left_derivative(&f, order(1.0), 0.0, 1.0).unwrap();
        let fd = central_difference(|t: f64| t.sin() + t * t, 1.0, 1e-2);
        assert!((d - fd).abs() < 1e-6);
        let d = rl_right_derivative(&f, order(1.0), 2.0, 1.0).unwrap();
        assert!((d + fd).abs() < 1e-6);
    }

    #[test]
    fn rl_right_closed_forms() {
        let one = sf(|_| 1.0, 0.0, 1.0);
        let d = rl_right_derivative(&one, order(0.5), 1.0, 0.0).unwrap();
        assert!((d - 1.0 / PI.sqrt()).abs() < 1e-6, "{d}");
        let c = sf(|_| 3.0, 0.0, 1.0);
        let d = rl_right_derivative(&c, order(0.5), 1.0, 0.25).unwrap();
        let exact = 3.0 * 0.75f64.powf(-0.5) / gamma(0.5);
        assert!((d - exact).abs() < 1e-6, "{d} vs {exact}");
    }

    #[test]
    fn rl_domain_errors() {
        let f = sf(|t| t, 0.0, 1.0);
        assert!(matches!(
            rl_left_derivative(&f, order(0.5), 0.5, 0.5),
            Err(FracError::DomainError(_))
        ));
        assert!(matches!(
            rl_right_derivative(&f, order(0.5), 0.5, 0.7),
            Err(FracError::DomainError(_))
        ));
    }
}
