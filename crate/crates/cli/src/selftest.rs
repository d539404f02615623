//! Built-in verification: fractional-operator closed forms and the
//! Poisson-algebra identities on seeded random polynomials.

use std::f64::consts::PI;

use fracjet::constraints::poisson_bracket;
use fracjet::expr::{phase_space_vars, random_poly, CanonicalVar};
use fracjet::fraccalc::{
    central_difference, conformal_derivative, gamma, rl_left_derivative, rl_right_derivative,
    FracOrder, SampledFunction,
};
use fracjet::Expr;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const POISSON_TRIPLES: usize = 100;
const POISSON_SEED: u64 = 0x5eed_f00d;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn order(alpha: f64) -> FracOrder {
    FracOrder::new(alpha).expect("valid order")
}

pub fn fraccalc_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let half = order(0.5);

    let t2 = SampledFunction::new(|t: f64| t * t, 0.0, 2.0).unwrap();
    let conf = conformal_derivative(&t2, half, 1.0);
    out.push(match conf {
        Ok(v) => check(
            "conformal",
            (v - 2.0).abs() <= 1e-4,
            format!("D^0.5 t^2 |_{{t=1}} = {v:.4}"),
        ),
        Err(e) => check("conformal", false, e.to_string()),
    });

    let one = SampledFunction::new(|_| 1.0, 0.0, 1.0).unwrap();
    let want = 1.0 / PI.sqrt();
    out.push(match rl_left_derivative(&one, half, 0.0, 1.0) {
        Ok(v) => check(
            "rl-left constant",
            (v - want).abs() <= 1e-6,
            format!("{v:.6} vs {want:.6}"),
        ),
        Err(e) => check("rl-left constant", false, e.to_string()),
    });
    out.push(match rl_right_derivative(&one, half, 1.0, 0.0) {
        Ok(v) => check(
            "rl-right constant",
            (v - want).abs() <= 1e-6,
            format!("{v:.6} vs {want:.6}"),
        ),
        Err(e) => check("rl-right constant", false, e.to_string()),
    });

    // D^1.5 t^2 = Gamma(3) / Gamma(1.5) t^0.5
    let want = gamma(3.0) / gamma(1.5);
    out.push(match rl_left_derivative(&t2, order(1.5), 0.0, 1.0) {
        Ok(v) => check(
            "rl-left power",
            (v - want).abs() <= 1e-6 * want,
            format!("D^1.5 t^2 |_{{t=1}} = {v:.6} vs {want:.6}"),
        ),
        Err(e) => check("rl-left power", false, e.to_string()),
    });

    let f = |t: f64| (2.0 * t).sin() + t * t;
    let sf = SampledFunction::new(f, 0.0, 2.0).unwrap();
    let t = 0.7;
    let fd = central_difference(f, t, 1e-2);
    let first = order(1.0);
    let reductions = [
        rl_left_derivative(&sf, first, 0.0, t).map(|v| v - fd),
        rl_right_derivative(&sf, first, 2.0, t).map(|v| v + fd),
        conformal_derivative(&sf, first, t).map(|v| v - fd),
    ];
    out.push(
        match reductions.iter().cloned().collect::<Result<Vec<_>, _>>() {
            Ok(d) => {
                let worst = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                check(
                    "order-one reduction",
                    worst <= 1e-6,
                    format!("max deviation from finite difference {worst:.2e}"),
                )
            }
            Err(e) => check("order-one reduction", false, e.to_string()),
        },
    );

    let g = |t: f64| (-t).exp();
    let k = -1.5;
    let combined = SampledFunction::new(move |t: f64| k * f(t) + g(t), 0.0, 2.0).unwrap();
    let sg = SampledFunction::new(g, 0.0, 2.0).unwrap();
    let lin = (|| -> Result<f64, fracjet::fraccalc::FracError> {
        let mut worst = 0.0f64;
        for alpha in [0.3, 0.5, 1.4] {
            let a = order(alpha);
            let lhs = rl_left_derivative(&combined, a, 0.0, 1.2)?;
            let rhs =
                k * rl_left_derivative(&sf, a, 0.0, 1.2)? + rl_left_derivative(&sg, a, 0.0, 1.2)?;
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
            if alpha <= 1.0 {
                let lhs = conformal_derivative(&combined, a, 1.2)?;
                let rhs =
                    k * conformal_derivative(&sf, a, 1.2)? + conformal_derivative(&sg, a, 1.2)?;
                worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
            }
        }
        Ok(worst)
    })();
    out.push(match lin {
        Ok(worst) => check(
            "linearity",
            worst <= 1e-8,
            format!("max relative deviation {worst:.2e}"),
        ),
        Err(e) => check("linearity", false, e.to_string()),
    });
    out
}

/// Antisymmetry, Leibniz and Jacobi, plus bilinearity, on seeded random
/// triples of degree at most 3 over `N = 3`.
pub fn poisson_checks(triples: usize) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(POISSON_SEED);
    let mut vars = phase_space_vars(3);
    vars.extend([CanonicalVar::T, CanonicalVar::P0]);
    let pb = |a: &Expr, b: &Expr| poisson_bracket(a, b).expect("phase-space polynomials");
    let mut failures = [0usize; 4];
    for _ in 0..triples {
        let [f, g, h] = [(); 3].map(|_| random_poly(&mut rng, &vars, 3, 4));
        if pb(&f, &g) != -pb(&g, &f) || !pb(&f, &f).is_zero() {
            failures[0] += 1;
        }
        if pb(&f, &(&g * &h)) != &(&pb(&f, &g) * &h) + &(&g * &pb(&f, &h)) {
            failures[1] += 1;
        }
        let jacobi = &(&pb(&f, &pb(&g, &h)) + &pb(&g, &pb(&h, &f))) + &pb(&h, &pb(&f, &g));
        if !jacobi.is_zero() {
            failures[2] += 1;
        }
        if pb(&(&f + &g), &h) != &pb(&f, &h) + &pb(&g, &h) {
            failures[3] += 1;
        }
    }
    [
        "poisson antisymmetry",
        "poisson leibniz",
        "poisson jacobi",
        "poisson bilinearity",
    ]
    .into_iter()
    .zip(failures)
    .map(|(name, bad)| {
        check(
            name,
            bad == 0,
            format!("{} of {triples} random triples exact", triples - bad),
        )
    })
    .collect()
}

pub fn all_checks() -> Vec<Check> {
    let mut checks = fraccalc_checks();
    checks.extend(poisson_checks(POISSON_TRIPLES));
    checks
}
