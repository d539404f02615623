use std::collections::BTreeMap;

use fracjet::expr::{normalize, random_poly, rat, CanonicalVar, Expr, Rational, RawExpr};
use fracjet::parser::{parse, parse_raw, render};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const N: u32 = 3;

fn all_vars() -> Vec<CanonicalVar> {
    let mut v = vec![CanonicalVar::T, CanonicalVar::P0];
    for i in 1..=N {
        v.extend([
            CanonicalVar::X(i),
            CanonicalVar::V(i),
            CanonicalVar::A(i),
            CanonicalVar::J(i, 1),
            CanonicalVar::J(i, 2),
            CanonicalVar::P(i),
            CanonicalVar::Pi(i),
        ]);
    }
    v
}

fn jet_vars() -> Vec<CanonicalVar> {
    all_vars()
        .into_iter()
        .filter(|v| !v.is_momentum())
        .collect()
}

fn poly(vars: Vec<CanonicalVar>, degree: u32, terms: usize) -> impl Strategy<Value = Expr> {
    any::<u64>()
        .prop_map(move |seed| random_poly(&mut StdRng::seed_from_u64(seed), &vars, degree, terms))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn raw_tree() -> impl Strategy<Value = RawExpr> {
    let vars = all_vars();
    let leaf = prop_oneof![
        small_rational().prop_map(RawExpr::Num),
        proptest::sample::select(vars).prop_map(RawExpr::Var),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| RawExpr::Neg(Box::new(e))),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(RawExpr::Add),
            proptest::collection::vec(inner.clone(), 2..3).prop_map(RawExpr::Mul),
            (inner, 0i64..=3).prop_map(|(b, k)| RawExpr::pow(b, RawExpr::Num(rat(k, 1)))),
        ]
    })
}

/// Fully parenthesized source text of a raw tree.
fn source(e: &RawExpr) -> String {
    match e {
        RawExpr::Num(r) if r.is_integer() => format!("({})", r.numer()),
        RawExpr::Num(r) => format!("({}/{})", r.numer(), r.denom()),
        RawExpr::Var(v) => v.to_string(),
        RawExpr::Neg(inner) => format!("(-{})", source(inner)),
        RawExpr::Add(items) => {
            format!(
                "({})",
                items.iter().map(source).collect::<Vec<_>>().join(" + ")
            )
        }
        RawExpr::Mul(items) => {
            format!(
                "({})",
                items.iter().map(source).collect::<Vec<_>>().join("*")
            )
        }
        RawExpr::Pow(b, k) => format!("({})^{}", source(b), source(k).trim_matches(['(', ')'])),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn render_parse_round_trip(e in poly(all_vars(), 4, 6)) {
        let text = render(&e);
        prop_assert_eq!(parse(&text, N).unwrap(), e, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parsed_trees_normalize_like_built_trees(tree in raw_tree()) {
        let text = source(&tree);
        let parsed = parse(&text, N).unwrap();
        prop_assert_eq!(parsed, normalize(&tree).unwrap(), "{}", text);
    }

    #[test]
    fn normalization_is_idempotent(tree in raw_tree()) {
        let once = normalize(&tree).unwrap();
        let again = normalize(&parse_raw(&render(&once), N).unwrap()).unwrap();
        prop_assert_eq!(once, again);
    }

    #[test]
    fn derivative_obeys_leibniz(
        f in poly(all_vars(), 3, 5),
        g in poly(all_vars(), 3, 5),
        v in proptest::sample::select(all_vars()),
    ) {
        let lhs = (&f * &g).diff(&v);
        let rhs = &(&f.diff(&v) * &g) + &(&f * &g.diff(&v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(
        f in poly(all_vars(), 4, 6),
        u in proptest::sample::select(all_vars()),
        v in proptest::sample::select(all_vars()),
    ) {
        prop_assert_eq!(f.diff(&u).diff(&v), f.diff(&v).diff(&u));
    }

    #[test]
    fn time_derivative_is_a_derivation(
        f in poly(jet_vars(), 3, 5),
        g in poly(jet_vars(), 3, 5),
        c in small_rational(),
    ) {
        let d = |e: &Expr| e.total_time_derivative().unwrap();
        prop_assert_eq!(d(&(&f * &g)), &(&d(&f) * &g) + &(&f * &d(&g)));
        prop_assert_eq!(d(&(&f.scale(&c) + &g)), &d(&f).scale(&c) + &d(&g));
        prop_assert!(d(&Expr::constant(c)).is_zero());
    }

    #[test]
    fn substitution_is_linear_and_multiplicative(
        f in poly(all_vars(), 3, 5),
        g in poly(all_vars(), 3, 5),
        rhs1 in poly(vec![CanonicalVar::T, CanonicalVar::V(1), CanonicalVar::P(2)], 2, 3),
        rhs2 in poly(vec![CanonicalVar::X(3), CanonicalVar::Pi(1)], 2, 3),
        c in small_rational(),
    ) {
        let rules = BTreeMap::from([
            (CanonicalVar::X(1), rhs1),
            (CanonicalVar::A(2), rhs2),
        ]);
        let s = |e: &Expr| e.substitute(&rules).unwrap();
        prop_assert_eq!(s(&(&f.scale(&c) + &g)), &s(&f).scale(&c) + &s(&g));
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
    }
}
