use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExprError, Rational};

/// Symbol type a [`Poly`] ranges over.
pub trait Variable: Ord + Clone + fmt::Debug + fmt::Display {
    /// Ordering of factors and terms in printed output.
    fn display_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Variable for super::CanonicalVar {
    fn display_cmp(&self, other: &Self) -> Ordering {
        super::CanonicalVar::display_cmp(self, other)
    }
}

/// Power product with positive exponents, factors sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V> {
    factors: Vec<(V, u32)>,
}

impl<V: Variable> Monomial<V> {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn var(v: V) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary factors; zero exponents are dropped
    /// and repeated variables merged.
    pub fn from_factors(factors: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Removes one power of `v`, returning the exponent it had.
    fn lower(&self, v: &V) -> Option<(u32, Self)> {
        let pos = self.factors.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.factors[pos].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }

    fn display_factors(&self) -> Vec<&(V, u32)> {
        let mut fs: Vec<_> = self.factors.iter().collect();
        fs.sort_by(|a, b| a.0.display_cmp(&b.0));
        fs
    }

    fn display_cmp(&self, other: &Self) -> Ordering {
        let a = self.display_factors();
        let b = other.display_factors();
        for (x, y) in a.iter().zip(b.iter()) {
            let ord = x.0.display_cmp(&y.0).then_with(|| y.1.cmp(&x.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        b.len().cmp(&a.len())
    }
}

impl<V: Variable> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.display_factors().into_iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with exact rational coefficients. No stored zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<V: Variable> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

impl<V: Variable> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> Poly<V> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial<V>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<V> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn contains_var(&self, v: &V) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn any_var(&self, mut pred: impl FnMut(&V) -> bool) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors.iter().any(|(v, _)| pred(v)))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest total degree in the variables selected by `pred`.
    pub fn degree_in(&self, mut pred: impl FnMut(&V) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.factors
                    .iter()
                    .filter(|(v, _)| pred(v))
                    .map(|(_, e)| e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative; every other variable is independent.
    pub fn diff(&self, v: &V) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Replaces every variable by a polynomial over another variable type.
    pub fn compose<U: Variable>(&self, mut f: impl FnMut(&V) -> Poly<U>) -> Poly<U> {
        let mut cache: BTreeMap<V, Poly<U>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in &m.factors {
                let image = cache.entry(v.clone()).or_insert_with(|| f(v));
                term = &term * &image.pow(*e);
            }
            out = &out + &term;
        }
        out
    }

    /// Simultaneous substitution. Rejects rule sets whose right-hand sides
    /// mention any left-hand variable.
    pub fn substitute(&self, rules: &BTreeMap<V, Poly<V>>) -> Result<Self, ExprError> {
        for (lhs, rhs) in rules {
            if let Some(bad) = rhs.vars().into_iter().find(|v| rules.contains_key(v)) {
                return Err(ExprError::InvalidSubstitution(format!(
                    "rule for {lhs} refers to substituted variable {bad}"
                )));
            }
        }
        if rules.is_empty() {
            return Ok(self.clone());
        }
        Ok(self.compose(|v| {
            rules
                .get(v)
                .cloned()
                .unwrap_or_else(|| Poly::var(v.clone()))
        }))
    }

    pub fn eval(&self, mut value: impl FnMut(&V) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let coeff = c.to_f64().unwrap_or(f64::NAN);
                m.factors
                    .iter()
                    .fold(coeff, |acc, (v, e)| acc * value(v).powi(*e as i32))
            })
            .sum()
    }

    pub fn eval_exact(&self, mut value: impl FnMut(&V) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.factors {
                t *= num_traits::pow(value(v), *e as usize);
            }
            total += t;
        }
        total
    }

    /// Terms in printed order.
    pub fn display_terms(&self) -> Vec<(&Monomial<V>, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| a.0.display_cmp(b.0));
        ts
    }
}

impl<V: Variable> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<V: Variable> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<V: Variable> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<V: Variable> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<V: Variable> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<V: Variable> $tr for Poly<V> {
            type Output = Poly<V>;
            fn $method(self, rhs: Poly<V>) -> Poly<V> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<V: Variable> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat, CanonicalVar::*, Expr};
    use super::*;

    fn v(x: super::super::CanonicalVar) -> Expr {
        Expr::var(x)
    }

    #[test]
    fn binomial_cancels_to_square() {
        let e = &(&(&v(V(1)) + &v(X(1))).pow(2) - &v(V(1)).pow(2))
            - &(&v(V(1)) * &v(X(1))).scale(&int(2));
        assert_eq!(e, v(X(1)).pow(2));
    }

    #[test]
    fn cancellation_leaves_momentum() {
        let e = &(&v(P(1)) + &v(X(1))) - &v(X(1));
        assert_eq!(e, v(P(1)));
    }

    #[test]
    fn collection_merges_like_terms() {
        let e = &(&v(A(1)) * &v(A(1))).scale(&rat(1, 2)) + &v(A(2)).pow(2).scale(&rat(1, 2));
        assert_eq!(e.len(), 2);
        assert_eq!(e.to_string(), "1/2*a1^2 + 1/2*a2^2");
    }

    #[test]
    fn diff_examples() {
        let l = &v(A(1)).pow(2).scale(&rat(1, 2)) + &v(A(2)).pow(2).scale(&rat(1, 2));
        assert_eq!(l.diff(&A(1)), v(A(1)));
        assert_eq!((&v(V(3)) * &v(A(3))).diff(&V(3)), v(A(3)));
        assert!((&v(P(1)) * &v(V(1))).diff(&X(2)).is_zero());
    }

    #[test]
    fn time_derivative_prolongs_jets() {
        assert_eq!(v(A(1)).total_time_derivative().unwrap(), v(J(1, 1)));
        assert_eq!(v(J(2, 3)).total_time_derivative().unwrap(), v(J(2, 4)));
        assert_eq!(v(T).total_time_derivative().unwrap(), Expr::one());
        let p3 = &v(A(3)) - &v(V(3)).total_time_derivative().unwrap();
        assert!(p3.is_zero());
        assert!(v(Pi(1)).total_time_derivative().is_err());
        assert!(v(P0).total_time_derivative().is_err());
    }

    #[test]
    fn substitute_examples() {
        let half = rat(1, 2);
        let e = v(A(1)).pow(2).scale(&half);
        let rules = BTreeMap::from([(A(1), v(Pi(1)))]);
        assert_eq!(e.substitute(&rules).unwrap(), v(Pi(1)).pow(2).scale(&half));

        let e = v(X(3)).pow(2).scale(&rat(-1, 2));
        let rules = BTreeMap::from([(X(3), Expr::zero())]);
        assert!(e.substitute(&rules).unwrap().is_zero());

        assert_eq!(e.substitute(&BTreeMap::new()).unwrap(), e);
    }

    #[test]
    fn recursive_rules_rejected() {
        let rules = BTreeMap::from([(X(1), &v(X(1)) + &Expr::one())]);
        assert!(matches!(
            v(X(1)).substitute(&rules),
            Err(ExprError::InvalidSubstitution(_))
        ));
        let rules = BTreeMap::from([(X(1), v(V(1))), (V(1), v(X(1)))]);
        assert!(v(X(1)).substitute(&rules).is_err());
    }

    #[test]
    fn equality_examples() {
        assert!((&v(P(1)) + &v(V(1))).equal(&(&v(V(1)) + &v(P(1)))));
        assert!(!(&v(Pi(3)) - &v(V(3))).equal(&Expr::zero()));
        let lhs = (&v(V(1)) + &Expr::one()).pow(2);
        let rhs = &(&v(V(1)).pow(2) + &v(V(1)).scale(&int(2))) + &Expr::one();
        assert!(lhs.equal(&rhs));
    }

    #[test]
    fn display_orders_terms() {
        assert_eq!((&v(Pi(3)) - &v(V(3))).to_string(), "pi3 - v3");
        assert_eq!((&-&v(V(1)) - &v(J(1, 1))).to_string(), "-j1_1 - v1");
        assert_eq!(v(Pi(1)).pow(2).scale(&rat(1, 2)).to_string(), "1/2*pi1^2");
        assert_eq!(Expr::zero().to_string(), "0");
        assert_eq!((&v(X(1)) + &Expr::constant(int(3))).to_string(), "x1 + 3");
    }

    #[test]
    fn as_constant() {
        assert_eq!(Expr::zero().as_constant(), Some(int(0)));
        assert_eq!(Expr::constant(rat(3, 4)).as_constant(), Some(rat(3, 4)));
        assert_eq!(v(X(1)).as_constant(), None);
    }
}
