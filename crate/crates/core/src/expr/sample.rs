use rand::Rng;

use super::{rat, CanonicalVar, Expr, Monomial};

/// Random polynomial over `vars` with at most `max_terms` terms of total
/// degree at most `max_degree` and small rational coefficients.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    vars: &[CanonicalVar],
    max_degree: u32,
    max_terms: usize,
) -> Expr {
    let terms = rng.gen_range(0..=max_terms);
    Expr::from_terms((0..terms).map(|_| {
        let degree = rng.gen_range(0..=max_degree);
        let factors: Vec<_> = (0..degree)
            .map(|_| (vars[rng.gen_range(0..vars.len())], 1))
            .collect();
        let num = rng.gen_range(-9..=9);
        let den = rng.gen_range(1..=4);
        (Monomial::from_factors(factors), rat(num, den))
    }))
}

/// `x_i`, `v_i`, `p_i`, `pi_i` for `i = 1..=n`.
pub fn phase_space_vars(n: u32) -> Vec<CanonicalVar> {
    (1..=n)
        .flat_map(|i| {
            [
                CanonicalVar::X(i),
                CanonicalVar::V(i),
                CanonicalVar::P(i),
                CanonicalVar::Pi(i),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn respects_bounds() {
        let mut rng = StdRng::seed_from_u64(7);
        let vars = phase_space_vars(3);
        for _ in 0..200 {
            let e = random_poly(&mut rng, &vars, 3, 5);
            assert!(e.degree() <= 3 && e.len() <= 5);
            assert!(e.vars().iter().all(|v| vars.contains(v)));
        }
    }
}
