use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Polynomial, Rational};

use super::{induced_map, GradedLinearMap, GradedSubspace, QuotientRing};

/// A finite group acting on a quotient ring by permuting its generators.
#[derive(Clone, Debug)]
pub struct GroupAction {
    ring: Arc<QuotientRing>,
    perms: Vec<Vec<usize>>,
    maps: Vec<GradedLinearMap>,
}

impl GroupAction {
    /// Close the given generator permutations into a group (at most `limit` elements)
    /// and check that every element is a ring automorphism.
    pub fn from_permutations(
        ring: &Arc<QuotientRing>,
        generators: &[Vec<usize>],
        limit: usize,
    ) -> Result<Self> {
        let n = ring.vars().len();
        for g in generators {
            let seen: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != n || seen.len() != n || seen.iter().any(|&i| i >= n) {
                return Err(Error::InvalidAction(format!("{g:?} is not a permutation of {n} generators")));
            }
            for (i, &j) in g.iter().enumerate() {
                if ring.vars().degree(i) != ring.vars().degree(j) {
                    return Err(Error::InvalidAction(format!(
                        "{} and {} have different degrees",
                        ring.vars().get(i).display_name(),
                        ring.vars().get(j).display_name()
                    )));
                }
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
                if elements.insert(q.clone()) {
                    if elements.len() > limit {
                        return Err(Error::GroupTooLarge { limit });
                    }
                    queue.push_back(q);
                }
            }
        }
        let perms: Vec<Vec<usize>> = elements.into_iter().collect();
        let maps = perms
            .iter()
            .map(|p| {
                let images: Vec<Polynomial> = p.iter().map(|&j| ring.var(j)).collect();
                induced_map(ring, ring, &images)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAction {
            ring: ring.clone(),
            perms,
            maps,
        })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[GradedLinearMap] {
        &self.maps
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Average of the orbit of `c`.
    pub fn symmetrize(&self, c: &Polynomial) -> Polynomial {
        let mut sum = Polynomial::zero(self.ring.vars());
        for m in &self.maps {
            sum = &sum + &m.apply(c);
        }
        sum.scale(&Rational::new(1.into(), (self.order() as i64).into()))
    }

    /// Averaging operator on degree `k`, as a matrix on normal-form coordinates.
    pub fn averaging_matrix(&self, k: usize) -> Matrix {
        let r = self.ring.rank(k);
        let mut acc = Matrix::zeros(r, r);
        for m in &self.maps {
            acc = acc.add(m.block(k));
        }
        acc.scale(&Rational::new(1.into(), (self.order() as i64).into()))
    }

    /// Fixed classes in every degree.
    pub fn invariant_subspace(&self) -> GradedSubspace {
        let mut s = GradedSubspace::zero(self.ring.clone());
        for k in 0..=self.ring.top_degree() {
            let a = self.averaging_matrix(k);
            for j in 0..a.ncols() {
                s.insert_coords(k, &a.column(j));
            }
        }
        s
    }
}
