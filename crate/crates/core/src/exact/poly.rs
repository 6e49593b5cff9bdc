use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    /// Graded degree contributed by one power of this variable.
    pub weight: u32,
}

/// An ordered set of graded variables. Registration order fixes the monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<Variable>,
}

impl Ring {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Arc<Ring>> {
        let mut out: Vec<Variable> = Vec::new();
        for (name, weight) in vars {
            let name = name.into();
            if weight == 0 {
                return Err(Error::ZeroWeight(name));
            }
            if out.iter().any(|v| v.name == name) {
                return Err(Error::DuplicateVariable(name));
            }
            out.push(Variable { name, weight });
        }
        Ok(Arc::new(Ring { vars: out }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn weight(&self, index: usize) -> u32 {
        self.vars[index].weight
    }

    pub fn name(&self, index: usize) -> &str {
        &self.vars[index].name
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.vars).map(|(e, v)| e * v.weight).sum()
    }
}

/// Exponent vector tagged with its weighted degree.
///
/// The derived order compares the degree first and then the exponents
/// lexicographically in registration order, which is graded-lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(ring: &Ring, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), ring.len(), "exponent vector length must match ring size");
        Monomial {
            degree: ring.weighted_degree(&exps),
            exps,
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Monomial::new(ring, vec![0; ring.len()])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Sparse polynomial with exact rational coefficients over a [`Ring`].
///
/// No stored coefficient is zero. Terms iterate in ascending graded-lex order;
/// [`Display`](fmt::Display) prints them descending.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Poly::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, value: Rational) -> Self {
        let mut p = Poly::zero(ring);
        p.add_term(Monomial::one(ring), value);
        p
    }

    /// The generator at `index` in registration order.
    pub fn var(ring: &Arc<Ring>, index: usize) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[index] = 1;
        let mut p = Poly::zero(ring);
        p.add_term(Monomial::new(ring, exps), Rational::one());
        p
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Option<Self> {
        ring.index_of(name).map(|i| Poly::var(ring, i))
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Poly::zero(ring);
        for (exps, c) in terms {
            p.add_term(Monomial::new(ring, exps), c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(&self.ring, exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
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

    /// Largest weighted degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        self.filter(|m| m.degree() == degree)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Terms whose exponent of `var` is exactly `exp`.
    pub fn terms_with_exponent(&self, var: usize, exp: u32) -> Poly {
        self.filter(|m| m.exponent(var) == exp)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Ring homomorphism sending generator `i` to `images[i]` in `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.len(), "one image per generator");
        for img in images {
            assert!(same_ring(&img.ring, target), "substitution images must live in the target ring");
        }
        // Powers are cached per generator since terms share them heavily.
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|img| vec![Poly::one(target), img.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[i];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out = out + term;
        }
        out
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.ring.len(), "one value per generator");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(values)
                    .fold(c.clone(), |acc, (&e, v)| acc * super::rational_pow(v, e))
            })
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomial arithmetic across incompatible rings"
        );
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = Poly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                c.abs()
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if m.is_one() {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            let mut first = true;
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(self.ring.name(v))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn s_ring() -> Arc<Ring> {
        Ring::new([("s1", 1), ("s2", 2)]).unwrap()
    }

    #[test]
    fn ring_rejects_duplicates_and_zero_weight() {
        assert!(matches!(Ring::new([("a", 1), ("a", 2)]), Err(Error::DuplicateVariable(_))));
        assert!(matches!(Ring::new([("a", 0)]), Err(Error::ZeroWeight(_))));
    }

    #[test]
    fn arithmetic_examples() {
        let r = s_ring();
        let s1 = Poly::var(&r, 0);
        let s2 = Poly::var(&r, 1);
        assert_eq!(&s1 + &s1, s1.scale(&int(2)));
        assert!((s1.pow(2) * Poly::zero(&r)).is_zero());
        assert_eq!((&s1 - &s2) * (&s1 + &s2), s1.pow(2) - s2.pow(2));
        assert!((&s1 - &s1).is_zero());
        assert_eq!((&s1 - &s1).num_terms(), 0);
    }

    #[test]
    fn homogeneous_part_examples() {
        let r = s_ring();
        let s1 = Poly::var(&r, 0);
        let s2 = Poly::var(&r, 1);
        let p = s1.pow(2) + &s2 + &s1;
        assert_eq!(p.homogeneous_part(2), s1.pow(2) + &s2);
        assert_eq!(p.homogeneous_part(1), s1);
        assert!(Poly::zero(&r).homogeneous_part(5).is_zero());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn display_is_descending_graded_lex() {
        let r = s_ring();
        let s1 = Poly::var(&r, 0);
        let s2 = Poly::var(&r, 1);
        let p = s1.pow(2).scale(&rat(-1, 6)) - &s2 + Poly::constant(&r, int(3)) + s1.scale(&rat(1, 2));
        assert_eq!(p.to_string(), "-1/6*s1^2 - s2 + 1/2*s1 + 3");
        assert_eq!(Poly::zero(&r).to_string(), "0");
        assert_eq!((&s1 * &s2).to_string(), "s1*s2");
    }

    #[test]
    fn substitution_and_evaluation_agree() {
        let r = s_ring();
        let target = Ring::new([("u", 1)]).unwrap();
        let u = Poly::var(&target, 0);
        let s1 = Poly::var(&r, 0);
        let s2 = Poly::var(&r, 1);
        let p = s1.pow(3) - s2.scale(&int(2)) + Poly::one(&r);
        // s1 -> u + 1, s2 -> u^2
        let images = [&u + &Poly::one(&target), u.pow(2)];
        let q = p.substitute(&target, &images);
        assert_eq!(q.evaluate(&[int(2)]), p.evaluate(&[int(3), int(4)]));
        assert_eq!(p.evaluate(&[int(3), int(4)]), int(27 - 8 + 1));
    }

    #[test]
    #[should_panic(expected = "incompatible rings")]
    fn mixing_rings_panics() {
        let a = Poly::var(&s_ring(), 0);
        let b = Poly::var(&Ring::new([("t", 1)]).unwrap(), 0);
        let _ = a + b;
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..4, 0u32..3), -20i64..20, 1i64..6), 0..8).prop_map(|terms| {
            let r = s_ring();
            Poly::from_terms(&r, terms.into_iter().map(|((a, b), p, q)| (vec![a, b], rat(p, q))))
        })
    }

    proptest! {
        #[test]
        fn homogeneous_parts_partition_the_terms(p in arb_poly()) {
            let top = p.degree().unwrap_or(0);
            let mut sum = Poly::zero(p.ring());
            for i in 0..=top {
                let pi = p.homogeneous_part(i);
                for j in (i + 1)..=top {
                    let pj = p.homogeneous_part(j);
                    prop_assert!(pi.terms().all(|(m, _)| pj.terms().all(|(n, _)| m != n)));
                }
                sum = sum + pi;
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
