//! Exact multivariate polynomials over the rationals with graded, slot-labelled generators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A graded generator. `slot` records which tensor factor the generator comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub name: String,
    pub slot: Option<u8>,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            slot: None,
            degree,
        }
    }

    pub fn slotted(name: impl Into<String>, slot: u8, degree: u32) -> Self {
        Generator {
            name: name.into(),
            slot: Some(slot),
            degree,
        }
    }

    /// `h` in slot 1 prints as `h1`; names already ending in a digit get an underscore.
    pub fn display_name(&self) -> String {
        match self.slot {
            None => self.name.clone(),
            Some(s) if self.name.ends_with(|c: char| c.is_ascii_digit()) => {
                format!("{}_{}", self.name, s)
            }
            Some(s) => format!("{}{}", self.name, s),
        }
    }
}

/// An ordered generator list shared by every polynomial of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarList {
    gens: Vec<Generator>,
}

impl VarList {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<VarList>> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::ZeroDegreeGenerator(g.display_name()));
            }
            if gens[..i]
                .iter()
                .any(|h| (h.name == g.name && h.slot == g.slot) || h.display_name() == g.display_name())
            {
                return Err(Error::DuplicateGenerator(g.display_name()));
            }
        }
        Ok(Arc::new(VarList { gens }))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn position(&self, name: &str, slot: Option<u8>) -> Option<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name && g.slot == slot)
    }

    pub fn position_display(&self, display: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.display_name() == display)
    }
}

/// Exponent vector over a fixed generator list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[i] = power;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self, vars: &VarList) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * vars.degree(i))
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Elimination order used for echelon pivots: compare exponents from the last
    /// generator backwards, larger exponent first. Returns `Less` when `self` is
    /// eliminated before `other`.
    pub fn elimination_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match b.cmp(a) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// All monomials of weighted degree `k`, sorted in elimination order.
pub fn monomials_of_degree(vars: &VarList, k: u32) -> Vec<Monomial> {
    fn rec(vars: &VarList, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == vars.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let d = vars.degree(i);
        let mut e = 0;
        while e * d <= left {
            cur[i] = e;
            rec(vars, i + 1, left - e * d, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(vars, 0, k, &mut vec![0; vars.len()], &mut out);
    out.sort_by(|a, b| a.elimination_cmp(b));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<VarList>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Arc<VarList>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarList>, c: Rational) -> Self {
        Self::term(vars, Monomial::one(vars.len()), c)
    }

    pub fn one(vars: &Arc<VarList>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<VarList>, i: usize) -> Self {
        Self::term(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn term(vars: &Arc<VarList>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms(
        vars: &Arc<VarList>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarList> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::MismatchedVariables)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.vars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Degrees of the terms present, ascending and deduplicated.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.degree(&self.vars)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// `Some(k)` when every term has degree `k`; zero is homogeneous of any degree
    /// and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn homogeneous_components(&self) -> Vec<(u32, Polynomial)> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree(&self.vars))
                .or_insert_with(|| Polynomial::zero(&self.vars))
                .add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn component(&self, k: u32) -> Polynomial {
        Polynomial::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree(&self.vars) == k)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Re-express over `target`, sending generator `i` to generator `map[i]`.
    pub fn embed(&self, target: &Arc<VarList>, map: &[usize]) -> Polynomial {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitute `images[i]` for generator `i`; images live over a common list.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len());
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return self.clone(),
        };
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Terms in display order: higher degree first, then lexicographic with
    /// earlier generators more significant.
    pub(crate) fn display_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.degree(&self.vars)
                .cmp(&a.degree(&self.vars))
                .then_with(|| b.0.cmp(&a.0))
        });
        v
    }

    pub fn format_monomial(vars: &VarList, m: &Monomial) -> String {
        let mut factors = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars.get(i).display_name()),
                _ => factors.push(format!("{}^{}", vars.get(i).display_name(), e)),
            }
        }
        factors.join("*")
    }
}

pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = Polynomial::format_monomial(&self.vars, m);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("generator lists differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("generator lists differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("generator lists differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[(&str, u32)]) -> Arc<VarList> {
        VarList::new(names.iter().map(|(n, d)| Generator::new(*n, *d)).collect()).unwrap()
    }

    #[test]
    fn square_of_hyperplane() {
        let v = vars(&[("h", 1)]);
        let h = Polynomial::var(&v, 0);
        assert_eq!((&h * &h).to_string(), "h^2");
    }

    #[test]
    fn difference_of_squares() {
        let v = VarList::new(vec![Generator::slotted("x", 1, 1), Generator::slotted("x", 2, 1)]).unwrap();
        let a = Polynomial::var(&v, 0);
        let b = Polynomial::var(&v, 1);
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn scalar_distributes() {
        let v = vars(&[("e", 1), ("f", 1)]);
        let e = Polynomial::var(&v, 0);
        let f = Polynomial::var(&v, 1);
        let p = &e.scale(&rat(2)) + &f.scale(&rat(4));
        assert_eq!(p.scale(&ratio(1, 2)), &e + &f.scale(&rat(2)));
    }

    #[test]
    fn components_of_total_chern_class() {
        let v = vars(&[("h", 1)]);
        let h = Polynomial::var(&v, 0);
        let c = &(&Polynomial::one(&v) + &h.scale(&rat(3))) + &h.pow(2).scale(&rat(3));
        let parts = c.homogeneous_components();
        let shown: Vec<(u32, String)> = parts.iter().map(|(k, p)| (*k, p.to_string())).collect();
        assert_eq!(
            shown,
            vec![(0, "1".into()), (1, "3*h".into()), (2, "3*h^2".into())]
        );
        assert!(Polynomial::zero(&v).homogeneous_components().is_empty());
    }

    #[test]
    fn mismatched_lists_are_rejected() {
        let a = Polynomial::var(&vars(&[("h", 1)]), 0);
        let b = Polynomial::var(&vars(&[("k", 1)]), 0);
        assert!(matches!(a.try_mul(&b), Err(Error::MismatchedVariables)));
    }

    #[test]
    fn duplicate_generators_are_rejected() {
        let r = VarList::new(vec![Generator::new("h", 1), Generator::new("h", 2)]);
        assert!(matches!(r, Err(Error::DuplicateGenerator(_))));
    }

    #[test]
    fn weighted_monomial_enumeration() {
        let v = vars(&[("a", 1), ("b", 2)]);
        let m = monomials_of_degree(&v, 4);
        // a^4, a^2 b, b^2
        assert_eq!(m.len(), 3);
        // elimination order puts the highest power of the last generator first
        assert_eq!(m[0], Monomial(vec![0, 2]));
        assert!(m.iter().all(|x| x.degree(&v) == 4));
    }

    #[test]
    fn display_names() {
        assert_eq!(Generator::slotted("h", 2, 1).display_name(), "h2");
        assert_eq!(Generator::slotted("c2", 0, 2).display_name(), "c2_0");
    }
}
