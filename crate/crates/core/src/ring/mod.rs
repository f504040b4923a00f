//! Finitely presented graded commutative rings with a top degree.
//!
//! A [`QuotientRing`] realises `Q[generators]/(relations)` degree by degree: the
//! degree-`k` part of the ideal is the span of all monomial multiples of the
//! relations (a truncated Macaulay matrix), kept in reduced echelon form with
//! pivots on the earliest monomial of the elimination order. The monomials that
//! are not pivots form the normal-form basis. Everything above `top_degree` is zero.

mod group;
mod map;
mod subspace;

pub use group::GroupAction;
pub use map::{image_kernel, induced_map, GradedLinearMap};
pub use subspace::{subalgebra_closure, GradedSubspace};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{monomials_of_degree, Monomial, Polynomial, Rational, VarList};

#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub name: String,
    pub vars: Arc<VarList>,
    pub relations: Vec<Polynomial>,
    pub top_degree: usize,
}

impl RingPresentation {
    pub fn new(
        name: impl Into<String>,
        vars: Arc<VarList>,
        relations: Vec<Polynomial>,
        top_degree: usize,
    ) -> Result<Self> {
        let mut kept = Vec::with_capacity(relations.len());
        for r in relations {
            if r.vars() != &vars && **r.vars() != *vars {
                return Err(Error::MismatchedVariables);
            }
            if r.is_zero() {
                continue;
            }
            match r.homogeneous_degree() {
                Some(0) => {
                    return Err(Error::WrongDegree {
                        what: format!("relation `{r}`"),
                        expected: 1,
                        found: 0,
                    })
                }
                Some(_) => kept.push(r),
                None => {
                    return Err(Error::Inhomogeneous {
                        what: format!("relation `{r}`"),
                        degrees: r.degrees(),
                    })
                }
            }
        }
        Ok(RingPresentation {
            name: name.into(),
            vars,
            relations: kept,
            top_degree,
        })
    }
}

/// Per-degree ranks of a graded model, degrees `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RankTable(pub Vec<usize>);

impl RankTable {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for RankTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl From<Vec<usize>> for RankTable {
    fn from(v: Vec<usize>) -> Self {
        RankTable(v)
    }
}

/// Normal-form data for one degree of a quotient ring.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal: Echelon,
    basis: Vec<usize>,
}

impl DegreeBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.basis.iter().map(|&i| &self.monomials[i])
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    fn sparse(&self, p: &Polynomial) -> SparseVec {
        let mut v = SparseVec::new();
        for (m, c) in p.terms() {
            if let Some(&i) = self.index.get(m) {
                v.insert(i, c.clone());
            }
        }
        v
    }

    /// Coordinates of the degree-`k` component of `p` in the normal-form basis.
    fn coords(&self, p: &Polynomial) -> Vec<Rational> {
        let r = self.ideal.reduce(&self.sparse(p));
        self.basis
            .iter()
            .map(|i| r.get(i).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn in_ideal(&self, p: &Polynomial) -> bool {
        self.ideal.contains(&self.sparse(p))
    }
}

#[derive(Debug)]
pub struct QuotientRing {
    pres: RingPresentation,
    degrees: Vec<DegreeBasis>,
}

impl QuotientRing {
    pub fn new(pres: RingPresentation) -> Result<Arc<QuotientRing>> {
        let vars = pres.vars.clone();
        let mut degrees: Vec<DegreeBasis> = Vec::with_capacity(pres.top_degree + 1);
        for k in 0..=pres.top_degree {
            let monomials = monomials_of_degree(&vars, k as u32);
            let index: HashMap<Monomial, usize> = monomials
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let mut ideal = Echelon::new(monomials.len());
            for r in &pres.relations {
                if r.homogeneous_degree() == Some(k as u32) {
                    let v: SparseVec = r.terms().map(|(m, c)| (index[m], c.clone())).collect();
                    ideal.insert(&v);
                }
            }
            for g in 0..vars.len() {
                let dg = vars.degree(g) as usize;
                if dg > k {
                    continue;
                }
                let prev = &degrees[k - dg];
                let shift = Monomial::var(vars.len(), g, 1);
                for row in prev.ideal.basis() {
                    let v: SparseVec = row
                        .iter()
                        .map(|(&j, c)| (index[&prev.monomials[j].mul(&shift)], c.clone()))
                        .collect();
                    ideal.insert(&v);
                }
            }
            let basis = (0..monomials.len()).filter(|&i| !ideal.is_pivot(i)).collect();
            degrees.push(DegreeBasis {
                degree: k,
                monomials,
                index,
                ideal,
                basis,
            });
        }
        Ok(Arc::new(QuotientRing { pres, degrees }))
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.pres
    }

    pub fn name(&self) -> &str {
        &self.pres.name
    }

    pub fn vars(&self) -> &Arc<VarList> {
        &self.pres.vars
    }

    pub fn top_degree(&self) -> usize {
        self.pres.top_degree
    }

    pub fn degree_basis(&self, k: usize) -> Result<&DegreeBasis> {
        self.degrees.get(k).ok_or(Error::DegreeOutOfRange {
            degree: k,
            top: self.top_degree(),
        })
    }

    pub fn rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, DegreeBasis::rank)
    }

    pub fn rank_table(&self) -> RankTable {
        RankTable(self.degrees.iter().map(DegreeBasis::rank).collect())
    }

    pub fn coords(&self, p: &Polynomial, k: usize) -> Vec<Rational> {
        match self.degrees.get(k) {
            Some(d) => d.coords(p),
            None => Vec::new(),
        }
    }

    pub fn from_coords(&self, k: usize, v: &[Rational]) -> Polynomial {
        let mut out = Polynomial::zero(self.vars());
        if let Some(d) = self.degrees.get(k) {
            for (&i, c) in d.basis.iter().zip(v) {
                out.add_term(d.monomials[i].clone(), c.clone());
            }
        }
        out
    }

    pub fn basis_class(&self, k: usize, i: usize) -> Polynomial {
        let d = &self.degrees[k];
        Polynomial::term(self.vars(), d.monomials[d.basis[i]].clone(), Rational::from_integer(1.into()))
    }

    pub fn basis_classes(&self, k: usize) -> Vec<Polynomial> {
        (0..self.rank(k)).map(|i| self.basis_class(k, i)).collect()
    }

    /// Unique representative: a combination of normal-form basis monomials.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.vars());
        for (k, part) in p.homogeneous_components() {
            let k = k as usize;
            if k > self.top_degree() {
                continue;
            }
            let c = self.degrees[k].coords(&part);
            out = &out + &self.from_coords(k, &c);
        }
        out
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        p.homogeneous_components()
            .iter()
            .all(|(k, part)| *k as usize > self.top_degree() || self.degrees[*k as usize].in_ideal(part))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.normal_form(&(a * b))
    }

    pub fn pow(&self, a: &Polynomial, n: u32) -> Polynomial {
        let mut out = self.normal_form(&Polynomial::one(self.vars()));
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }

    /// Evaluate `p` (over some other generator list) at `images`, which live in this ring.
    pub fn evaluate(&self, p: &Polynomial, images: &[Polynomial]) -> Polynomial {
        assert_eq!(p.vars().len(), images.len());
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.vars());
        for (m, c) in p.terms() {
            let mut t = Polynomial::constant(self.vars(), c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| self.pow(&images[i], e))
                    .clone();
                t = self.mul(&t, &pw);
                if t.is_zero() {
                    break;
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Generator `i` as a class.
    pub fn var(&self, i: usize) -> Polynomial {
        self.normal_form(&Polynomial::var(self.vars(), i))
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.vars())
    }
}
