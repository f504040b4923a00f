use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{dense_from_sparse, sparse_from_dense, Echelon};
use crate::poly::{Polynomial, Rational};

use super::{QuotientRing, RankTable};

/// A graded linear subspace of a quotient ring, one echelon basis per degree.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    ambient: Arc<QuotientRing>,
    parts: Vec<Echelon>,
}

impl GradedSubspace {
    pub fn zero(ambient: Arc<QuotientRing>) -> Self {
        let parts = (0..=ambient.top_degree())
            .map(|k| Echelon::new(ambient.rank(k)))
            .collect();
        GradedSubspace { ambient, parts }
    }

    pub fn full(ambient: Arc<QuotientRing>) -> Self {
        let mut s = Self::zero(ambient.clone());
        for k in 0..=ambient.top_degree() {
            for b in ambient.basis_classes(k) {
                s.insert(&b);
            }
        }
        s
    }

    pub(crate) fn from_parts(ambient: Arc<QuotientRing>, parts: Vec<Echelon>) -> Self {
        assert_eq!(parts.len(), ambient.top_degree() + 1);
        GradedSubspace { ambient, parts }
    }

    /// Span of the given classes; inhomogeneous classes contribute each component.
    pub fn spanned_by(ambient: Arc<QuotientRing>, classes: &[Polynomial]) -> Self {
        let mut s = Self::zero(ambient);
        for c in classes {
            s.insert(c);
        }
        s
    }

    pub fn ambient(&self) -> &Arc<QuotientRing> {
        &self.ambient
    }

    pub fn part(&self, k: usize) -> &Echelon {
        &self.parts[k]
    }

    pub fn rank(&self, k: usize) -> usize {
        self.parts.get(k).map_or(0, Echelon::rank)
    }

    pub fn ranks(&self) -> RankTable {
        RankTable(self.parts.iter().map(Echelon::rank).collect())
    }

    /// Adds every homogeneous component; returns true if the span grew.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        let mut grew = false;
        for (k, part) in p.homogeneous_components() {
            let k = k as usize;
            if k <= self.ambient.top_degree() {
                let c = self.ambient.coords(&part, k);
                grew |= self.parts[k].insert_dense(&c);
            }
        }
        grew
    }

    pub fn insert_coords(&mut self, k: usize, v: &[Rational]) -> bool {
        self.parts[k].insert_dense(v)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        p.homogeneous_components().iter().all(|(k, part)| {
            let k = *k as usize;
            k > self.ambient.top_degree()
                || self.parts[k].contains(&sparse_from_dense(&self.ambient.coords(part, k)))
        })
    }

    pub fn contains_coords(&self, k: usize, v: &[Rational]) -> bool {
        self.parts[k].contains(&sparse_from_dense(v))
    }

    /// Echelon basis of degree `k`, as classes of the ambient ring.
    pub fn basis_classes(&self, k: usize) -> Vec<Polynomial> {
        let n = self.ambient.rank(k);
        self.parts[k]
            .basis()
            .into_iter()
            .map(|row| self.ambient.from_coords(k, &dense_from_sparse(row, n)))
            .collect()
    }

    pub fn basis_coords(&self, k: usize) -> Vec<Vec<Rational>> {
        let n = self.ambient.rank(k);
        self.parts[k]
            .basis()
            .into_iter()
            .map(|row| dense_from_sparse(row, n))
            .collect()
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| {
            a.basis().into_iter().all(|row| b.contains(row))
        })
    }

    pub fn same_as(&self, other: &GradedSubspace) -> bool {
        self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.same_span(b))
    }

    /// First degree where the spans differ, with a class in one but not the other.
    pub fn first_difference(&self, other: &GradedSubspace) -> Option<(usize, Polynomial)> {
        for k in 0..self.parts.len().min(other.parts.len()) {
            let n = self.ambient.rank(k);
            for row in self.parts[k].basis() {
                if !other.parts[k].contains(row) {
                    return Some((k, self.ambient.from_coords(k, &dense_from_sparse(row, n))));
                }
            }
            for row in other.parts[k].basis() {
                if !self.parts[k].contains(row) {
                    return Some((k, self.ambient.from_coords(k, &dense_from_sparse(row, n))));
                }
            }
        }
        None
    }

    pub fn intersect(&self, other: &GradedSubspace) -> GradedSubspace {
        let parts = (0..self.parts.len())
            .map(|k| {
                let n = self.ambient.rank(k);
                let a = self.basis_coords(k);
                let b = other.basis_coords(k);
                let mut out = Echelon::new(n);
                if a.is_empty() || b.is_empty() {
                    return out;
                }
                // Solve Σ x_i a_i = Σ y_j b_j.
                let mut cols = a.clone();
                cols.extend(b.iter().map(|v| v.iter().map(|c| -c).collect()));
                let m = crate::linalg::Matrix::from_columns(n, &cols);
                for sol in m.nullspace() {
                    let mut v = vec![Rational::from_integer(0.into()); n];
                    for (x, ai) in sol.iter().zip(&a) {
                        for (t, c) in v.iter_mut().zip(ai) {
                            *t += x * c;
                        }
                    }
                    out.insert_dense(&v);
                }
                out
            })
            .collect();
        GradedSubspace {
            ambient: self.ambient.clone(),
            parts,
        }
    }
}

/// Smallest graded subspace containing 1 and `generators` and closed under products.
pub fn subalgebra_closure(
    ambient: &Arc<QuotientRing>,
    generators: &[Polynomial],
) -> Result<GradedSubspace> {
    let mut gens: Vec<(usize, Polynomial)> = Vec::new();
    for g in generators {
        if g.vars() != ambient.vars() {
            return Err(Error::MismatchedVariables);
        }
        for (k, part) in g.homogeneous_components() {
            let part = ambient.normal_form(&part);
            if k > 0 && !part.is_zero() && (k as usize) <= ambient.top_degree() {
                gens.push((k as usize, part));
            }
        }
    }
    let mut s = GradedSubspace::zero(ambient.clone());
    s.insert(&Polynomial::constant(ambient.vars(), Rational::one()));
    for k in 1..=ambient.top_degree() {
        for (j, g) in &gens {
            if *j > k {
                continue;
            }
            for b in s.basis_classes(k - j) {
                let prod = ambient.mul(g, &b);
                let c = ambient.coords(&prod, k);
                s.parts[k].insert_dense(&c);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Generator, VarList};
    use crate::ring::RingPresentation;

    fn p1xp1() -> Arc<QuotientRing> {
        let v = VarList::new(vec![Generator::new("a", 1), Generator::new("b", 1)]).unwrap();
        let a = Polynomial::var(&v, 0);
        let b = Polynomial::var(&v, 1);
        QuotientRing::new(RingPresentation::new("P1xP1", v, vec![a.pow(2), b.pow(2)], 2).unwrap())
            .unwrap()
    }

    #[test]
    fn closure_of_sum_class() {
        let r = p1xp1();
        let s = &r.var(0) + &r.var(1);
        let c = subalgebra_closure(&r, &[s]).unwrap();
        assert_eq!(c.ranks().0, vec![1, 1, 1]);
        assert!(c.contains(&(&r.var(0) * &r.var(1))));
        assert!(!c.contains(&r.var(0)));
    }

    #[test]
    fn intersection_and_difference() {
        let r = p1xp1();
        let full = GradedSubspace::full(r.clone());
        let c = subalgebra_closure(&r, &[&r.var(0) + &r.var(1)]).unwrap();
        assert!(c.is_subspace_of(&full));
        assert!(c.intersect(&full).same_as(&c));
        let (k, _) = c.first_difference(&full).unwrap();
        assert_eq!(k, 1);
    }
}
