//! Sparse polynomials with terms sorted in decreasing degrevlex order.

use std::collections::BTreeMap;

use super::field::Field;
use super::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E: Clone + PartialEq> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    /// Builds from arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms<F: Field<Elem = E>>(f: &F, terms: impl IntoIterator<Item = (Monomial, E)>) -> Self {
        let mut acc: BTreeMap<Monomial, E> = BTreeMap::new();
        for (m, c) in terms {
            let slot = acc.entry(m).or_insert_with(|| f.zero());
            *slot = f.add(slot, &c);
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !f.is_zero(c)).collect();
        Polynomial { terms }
    }

    /// Terms must already be strictly decreasing with nonzero coefficients.
    pub fn from_sorted_terms(terms: Vec<(Monomial, E)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Polynomial { terms }
    }

    pub fn monomial<F: Field<Elem = E>>(f: &F, m: Monomial) -> Self {
        Polynomial { terms: vec![(m, f.one())] }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        if f.is_zero(&c) {
            Self::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    /// Total degree, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Polynomial<E>> {
        let mut out: BTreeMap<u32, Vec<(Monomial, E)>> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.0.degree()).or_default().push(t.clone());
        }
        out.into_iter().map(|(d, terms)| (d, Polynomial { terms })).collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.combine(f, other, false)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.combine(f, other, true)
    }

    fn combine<F: Field<Elem = E>>(&self, f: &F, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: &E| if negate { f.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b.0, fix(&b.1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { f.sub(&a.1, &b.1) } else { f.add(&a.1, &b.1) };
                    if !f.is_zero(&c) {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|t| (t.0, fix(&t.1))));
        Polynomial { terms: out }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        if f.is_zero(c) {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (*m, f.mul(x, c))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut acc: Self = Self::zero();
        for (m, c) in &other.terms {
            acc = acc.add(f, &self.mul_monomial(m).scale(f, c));
        }
        acc
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, e: u32) -> Self {
        let mut r = Self::constant(f, f.one());
        for _ in 0..e {
            r = r.mul(f, self);
        }
        r
    }

    /// Scales so the leading coefficient is one.
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.terms.first() {
            None => Self::zero(),
            Some((_, c)) => self.scale(f, &f.inv(c)),
        }
    }

    /// Replaces each variable `i` by `images[i]`.
    pub fn substitute<F: Field<Elem = E>>(&self, f: &F, images: &[Polynomial<E>]) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(f, c.clone());
            for v in m.support() {
                t = t.mul(f, &images[v].pow(f, m.exp(v)));
            }
            acc = acc.add(f, &t);
        }
        acc
    }

    /// Reinterprets coefficients in another field.
    pub fn map_coeffs<E2: Clone + PartialEq, G: Field<Elem = E2>>(
        &self,
        g: &G,
        conv: impl Fn(&E) -> E2,
    ) -> Polynomial<E2> {
        Polynomial::from_terms(g, self.terms.iter().map(|(m, c)| (*m, conv(c))))
    }

    pub fn format<F: Field<Elem = E>>(&self, f: &F, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = f.format(c);
            let neg = cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&cs);
            } else {
                if cs != "1" {
                    s.push_str(&cs);
                    s.push('*');
                }
                s.push_str(&m.display_with(names));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{Fp, Rationals};
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -3i64..4), 0..6)
    }

    fn build(f: &Rationals, terms: &[(Vec<u32>, i64)]) -> Polynomial<num_rational::BigRational> {
        Polynomial::from_terms(f, terms.iter().map(|(e, c)| (Monomial::from_exponents(e), f.from_i64(*c))))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(4), b in arb_poly(4), c in arb_poly(4)) {
            let q = Rationals;
            let (a, b, c) = (build(&q, &a), build(&q, &b), build(&q, &c));
            prop_assert_eq!(a.mul(&q, &b), b.mul(&q, &a));
            prop_assert_eq!(a.mul(&q, &b.add(&q, &c)), a.mul(&q, &b).add(&q, &a.mul(&q, &c)));
            prop_assert!(a.sub(&q, &a).is_zero());
            prop_assert!(a.terms().windows(2).all(|w| w[0].0 > w[1].0));
        }
    }

    #[test]
    fn formatting() {
        let f = Fp::new(5);
        let names: Vec<String> = ["u", "v", "w"].iter().map(|s| s.to_string()).collect();
        let p = Polynomial::from_terms(
            &f,
            [(Monomial::from_exponents(&[2, 0, 0]), 1), (Monomial::from_exponents(&[0, 1, 1]), 4)],
        );
        assert_eq!(p.format(&f, &names), "u^2 + 4*v*w");
        let q = Rationals;
        let p = Polynomial::from_terms(
            &q,
            [(Monomial::from_exponents(&[2, 0, 0]), q.from_i64(1)), (Monomial::from_exponents(&[0, 1, 1]), q.from_i64(-1))],
        );
        assert_eq!(p.format(&q, &names), "u^2 - v*w");
    }
}
