use fracjet::fraccalc::{
    central_difference, conformal_derivative, rl_left_derivative, rl_right_derivative, FracOrder,
    SampledFunction,
};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn cubic(c: [f64; 4]) -> impl Fn(f64) -> f64 {
    move |t| c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rl_left_is_linear(
        alpha in 0.1f64..1.9,
        t in 0.3f64..2.0,
        c in proptest::array::uniform4(-3.0f64..3.0),
        d in proptest::array::uniform4(-3.0f64..3.0),
        k in -2.0f64..2.0,
    ) {
        let order = FracOrder::new(alpha).unwrap();
        let d_of = |f: &dyn Fn(f64) -> f64| {
            rl_left_derivative(&SampledFunction::new(f, 0.0, 2.0).unwrap(), order, 0.0, t).unwrap()
        };
        let (f, g) = (cubic(c), cubic(d));
        let combined = d_of(&|s| k * f(s) + g(s));
        let parts = k * d_of(&f) + d_of(&g);
        prop_assert!(rel_close(combined, parts, 1e-8), "{} vs {}", combined, parts);
    }

    #[test]
    fn conformal_is_linear(
        alpha in 0.2f64..=1.0,
        t in 0.5f64..1.5,
        c in proptest::array::uniform4(-3.0f64..3.0),
        d in proptest::array::uniform4(-3.0f64..3.0),
        k in -2.0f64..2.0,
    ) {
        let order = FracOrder::new(alpha).unwrap();
        let d_of = |f: &dyn Fn(f64) -> f64| {
            conformal_derivative(&SampledFunction::new(f, 0.0, 3.0).unwrap(), order, t).unwrap()
        };
        let (f, g) = (cubic(c), cubic(d));
        let combined = d_of(&|s| k * f(s) + g(s));
        let parts = k * d_of(&f) + d_of(&g);
        prop_assert!(rel_close(combined, parts, 1e-8), "{} vs {}", combined, parts);
    }

    #[test]
    fn right_derivative_is_reflected_left_derivative(
        alpha in 0.1f64..1.9,
        t in 0.2f64..1.6,
        c in proptest::array::uniform4(-3.0f64..3.0),
    ) {
        let (a, b) = (0.0, 2.0);
        let order = FracOrder::new(alpha).unwrap();
        let f = cubic(c);
        let right = rl_right_derivative(&SampledFunction::new(&f, a, b).unwrap(), order, b, t).unwrap();
        let reflected = |s: f64| f(a + b - s);
        let left = rl_left_derivative(
            &SampledFunction::new(reflected, a, b).unwrap(),
            order,
            a,
            a + b - t,
        )
        .unwrap();
        prop_assert!(rel_close(right, left, 1e-8), "{} vs {}", right, left);
    }

    #[test]
    fn first_order_reduces_to_the_derivative(
        t in 0.3f64..1.7,
        c in proptest::array::uniform4(-3.0f64..3.0),
    ) {
        let one = FracOrder::new(1.0).unwrap();
        let f = cubic(c);
        let fd = central_difference(&f, t, 1e-2);
        let sf = SampledFunction::new(&f, 0.0, 2.0).unwrap();
        let left = rl_left_derivative(&sf, one, 0.0, t).unwrap();
        let right = rl_right_derivative(&sf, one, 2.0, t).unwrap();
        let conf = conformal_derivative(&sf, one, t).unwrap();
        prop_assert!((left - fd).abs() < 1e-6);
        prop_assert!((right + fd).abs() < 1e-6);
        prop_assert!((conf - fd).abs() < 1e-6);
    }
}
