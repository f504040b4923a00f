//! Intersection-theoretic constructions on graded models: tensor products,
//! diagonal validation, projective bundles and blowups.

mod blowup;
mod bundle;

pub use blowup::{blowup, BlowupData, ChernLift, ChernSigns, ExceptionalBlowup};
pub use bundle::{projective_bundle, ProjectiveBundle};

use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Generator, Polynomial, Rational, VarList};
use crate::ring::{GradedSubspace, GroupAction, QuotientRing, RingPresentation};

/// Chern classes `c_0 = 1, c_1, …, c_r`, with `c_j` homogeneous of degree `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernVector(Vec<Polynomial>);

impl ChernVector {
    pub fn new(classes: Vec<Polynomial>) -> Result<Self> {
        let Some(c0) = classes.first() else {
            return Err(Error::Unsupported("empty Chern vector".into()));
        };
        if *c0 != Polynomial::one(c0.vars()) {
            return Err(Error::WrongDegree {
                what: format!("c_0 = `{c0}` (must be 1)"),
                expected: 0,
                found: c0.degrees().into_iter().max().unwrap_or(0),
            });
        }
        for (j, c) in classes.iter().enumerate() {
            if c.vars() != c0.vars() {
                return Err(Error::MismatchedVariables);
            }
            if !c.is_zero() && c.homogeneous_degree() != Some(j as u32) {
                return Err(Error::WrongDegree {
                    what: format!("Chern class c_{j} = `{c}`"),
                    expected: j as u32,
                    found: c.degrees().into_iter().max().unwrap_or(0),
                });
            }
        }
        Ok(ChernVector(classes))
    }

    /// Split a total Chern class into components `c_0..c_rank`.
    pub fn from_total(total: &Polynomial, rank: usize) -> Result<Self> {
        let mut classes = vec![Polynomial::zero(total.vars()); rank + 1];
        for (k, part) in total.homogeneous_components() {
            let k = k as usize;
            if k > rank {
                if part.is_zero() {
                    continue;
                }
                return Err(Error::WrongDegree {
                    what: format!("total Chern class `{total}`"),
                    expected: rank as u32,
                    found: k as u32,
                });
            }
            classes[k] = part;
        }
        Self::new(classes)
    }

    /// The trivial bundle of rank `r`.
    pub fn trivial(vars: &Arc<VarList>, rank: usize) -> Self {
        let mut classes = vec![Polynomial::zero(vars); rank + 1];
        classes[0] = Polynomial::one(vars);
        ChernVector(classes)
    }

    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, j: usize) -> &Polynomial {
        &self.0[j]
    }

    pub fn classes(&self) -> &[Polynomial] {
        &self.0
    }

    pub fn total(&self) -> Polynomial {
        self.0
            .iter()
            .fold(Polynomial::zero(self.0[0].vars()), |acc, c| &acc + c)
    }
}

/// A tensor product of rings with the generator embedding of each factor.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub ring: Arc<QuotientRing>,
    pub embeddings: Vec<Vec<usize>>,
}

impl TensorProduct {
    /// Place a class of factor `i` into the product.
    pub fn place(&self, i: usize, p: &Polynomial) -> Polynomial {
        p.embed(self.ring.vars(), &self.embeddings[i])
    }

    /// Place `Σ a ⊗ b` into factors `i` and `j`.
    pub fn place_pair(&self, i: usize, j: usize, terms: &[(Polynomial, Polynomial)]) -> Polynomial {
        terms.iter().fold(Polynomial::zero(self.ring.vars()), |acc, (a, b)| {
            &acc + &(&self.place(i, a) * &self.place(j, b))
        })
    }

    /// Generator permutation induced by permuting identical factors: factor `i` goes to `sigma[i]`.
    pub fn factor_permutation(&self, sigma: &[usize]) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.ring.vars().len()).collect();
        for (i, emb) in self.embeddings.iter().enumerate() {
            for (g, &pos) in emb.iter().enumerate() {
                perm[pos] = self.embeddings[sigma[i]][g];
            }
        }
        perm
    }
}

/// Tensor product of the given rings. Unslotted generators of factor `i` are labelled with slot `i`.
pub fn kunneth_product(factors: &[&QuotientRing]) -> Result<TensorProduct> {
    let mut gens = Vec::new();
    let mut embeddings = Vec::with_capacity(factors.len());
    for (i, r) in factors.iter().enumerate() {
        let mut emb = Vec::with_capacity(r.vars().len());
        for g in r.vars().gens() {
            let slot = g.slot.unwrap_or(i as u8);
            let ng = Generator::slotted(g.name.clone(), slot, g.degree);
            if gens.iter().any(|h: &Generator| h.name == ng.name && h.slot == ng.slot) {
                return Err(Error::SlotCollision(ng.display_name()));
            }
            emb.push(gens.len());
            gens.push(ng);
        }
        embeddings.push(emb);
    }
    let vars = VarList::new(gens).map_err(|e| match e {
        Error::DuplicateGenerator(g) => Error::SlotCollision(g),
        other => other,
    })?;
    let mut relations = Vec::new();
    for (r, emb) in factors.iter().zip(&embeddings) {
        for rel in &r.presentation().relations {
            relations.push(rel.embed(&vars, emb));
        }
    }
    let name = factors
        .iter()
        .map(|r| r.name())
        .collect::<Vec<_>>()
        .join("⊗");
    let top = factors.iter().map(|r| r.top_degree()).sum();
    let ring = QuotientRing::new(RingPresentation::new(name, vars, relations, top)?)?;
    Ok(TensorProduct { ring, embeddings })
}

pub fn tensor_power(ring: &QuotientRing, n: usize) -> Result<TensorProduct> {
    kunneth_product(&vec![ring; n])
}

/// The symmetric group on the factors of a tensor power, acting by generator permutations.
pub fn symmetric_group_action(tp: &TensorProduct) -> Result<GroupAction> {
    let n = tp.embeddings.len();
    let mut gens = Vec::new();
    if n >= 2 {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        gens.push(tp.factor_permutation(&swap));
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        gens.push(tp.factor_permutation(&cycle));
    }
    let order = (1..=n).product::<usize>();
    GroupAction::from_permutations(&tp.ring, &gens, order)
}

/// Invariants of `A^{⊗n}` under permutation of the factors: a model of `A*(Sym^n X)`.
pub fn symmetric_quotient(ring: &QuotientRing, n: usize) -> Result<(TensorProduct, GradedSubspace)> {
    let tp = tensor_power(ring, n)?;
    let inv = symmetric_group_action(&tp)?.invariant_subspace();
    Ok((tp, inv))
}

/// Chow-ring data of a smooth projective variety with the Künneth property.
#[derive(Clone, Debug)]
pub struct VarietyData {
    pub name: String,
    pub ring: Arc<QuotientRing>,
    pub dimension: usize,
    pub chern_tangent: ChernVector,
    /// The diagonal as `Σ a_i ⊗ b_i`.
    pub diagonal_terms: Vec<(Polynomial, Polynomial)>,
    pub point_class: Polynomial,
    pub square: TensorProduct,
}

impl VarietyData {
    pub fn new(
        name: impl Into<String>,
        ring: Arc<QuotientRing>,
        chern_total: &Polynomial,
        diagonal_terms: Vec<(Polynomial, Polynomial)>,
        point_class: Polynomial,
    ) -> Result<Self> {
        let dimension = ring.top_degree();
        let chern_tangent = ChernVector::from_total(&ring.normal_form(chern_total), dimension)?;
        if ring.rank(dimension) != 1 {
            return Err(Error::ModelCheck(format!(
                "top degree {dimension} has rank {}, expected 1",
                ring.rank(dimension)
            )));
        }
        if point_class.homogeneous_degree() != Some(dimension as u32) || ring.is_zero(&point_class) {
            return Err(Error::WrongDegree {
                what: format!("point class `{point_class}`"),
                expected: dimension as u32,
                found: point_class.degrees().into_iter().max().unwrap_or(0),
            });
        }
        let square = tensor_power(&ring, 2)?;
        Ok(VarietyData {
            name: name.into(),
            ring,
            dimension,
            chern_tangent,
            diagonal_terms,
            point_class,
            square,
        })
    }

    pub fn vars(&self) -> &Arc<VarList> {
        self.ring.vars()
    }

    /// The diagonal class in `A ⊗ A`.
    pub fn diagonal(&self) -> Polynomial {
        self.square.place_pair(0, 1, &self.diagonal_terms)
    }

    pub fn chern_total(&self) -> Polynomial {
        self.chern_tangent.total()
    }
}

/// Check `(g⊗1)·Δ = (1⊗g)·Δ` for every generator `g`, and that the component of `Δ`
/// of bidegree `(d, 0)` is `point ⊗ 1`.
pub fn validate_diagonal(x: &VarietyData) -> Result<()> {
    let sq = &x.square;
    let delta = x.diagonal();
    if !delta.is_zero() && delta.homogeneous_degree() != Some(x.dimension as u32) {
        return Err(Error::WrongDegree {
            what: format!("diagonal `{delta}`"),
            expected: x.dimension as u32,
            found: delta.degrees().into_iter().max().unwrap_or(0),
        });
    }
    for g in 0..x.vars().len() {
        let gv = Polynomial::var(x.vars(), g);
        let left = &sq.place(0, &gv) * &delta;
        let right = &sq.place(1, &gv) * &delta;
        let residual = sq.ring.normal_form(&(&left - &right));
        if !residual.is_zero() {
            return Err(Error::InvalidDiagonal {
                generator: x.vars().get(g).display_name(),
                residual: residual.to_string(),
            });
        }
    }
    let mut leading = Polynomial::zero(x.vars());
    for (a, b) in &x.diagonal_terms {
        let b0 = b.component(0);
        if !b0.is_zero() {
            let c = b0.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
            leading = &leading + &a.component(x.dimension as u32).scale(&c);
        }
    }
    let found = x.ring.normal_form(&leading);
    let expected = x.ring.normal_form(&x.point_class);
    if found != expected {
        return Err(Error::DiagonalNormalization {
            found: found.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn proj(n: u32) -> Arc<QuotientRing> {
        let v = VarList::new(vec![Generator::new("h", 1)]).unwrap();
        let h = Polynomial::var(&v, 0);
        QuotientRing::new(RingPresentation::new(format!("P{n}"), v, vec![h.pow(n + 1)], n as usize).unwrap())
            .unwrap()
    }

    fn proj_data(n: u32, diag_scale: Option<(usize, i64)>) -> VarietyData {
        let r = proj(n);
        let h = Polynomial::var(r.vars(), 0);
        let mut terms: Vec<(Polynomial, Polynomial)> =
            (0..=n).map(|i| (h.pow(n - i), h.pow(i))).collect();
        if let Some((i, c)) = diag_scale {
            terms[i].0 = terms[i].0.scale(&rat(c));
        }
        let mut chern = Polynomial::zero(r.vars());
        let one_plus_h = &Polynomial::one(r.vars()) + &h;
        chern = &chern + &one_plus_h.pow(n + 1);
        VarietyData::new(format!("P{n}"), r, &chern, terms, h.pow(n)).unwrap()
    }

    #[test]
    fn kunneth_ranks() {
        let p1 = proj(1);
        let p2 = proj(2);
        assert_eq!(kunneth_product(&[&p1, &p1]).unwrap().ring.rank_table().0, vec![1, 2, 1]);
        assert_eq!(kunneth_product(&[&p1, &p2]).unwrap().ring.rank_table().0, vec![1, 2, 2, 1]);
        assert_eq!(tensor_power(&p2, 3).unwrap().ring.rank_table().0, vec![1, 3, 6, 7, 6, 3, 1]);
    }

    #[test]
    fn slot_collision_detected() {
        let p1 = proj(1);
        let sq = tensor_power(&p1, 2).unwrap();
        assert!(matches!(
            kunneth_product(&[&sq.ring, &sq.ring]),
            Err(Error::SlotCollision(_))
        ));
    }

    #[test]
    fn diagonal_of_projective_plane() {
        let x = proj_data(2, None);
        validate_diagonal(&x).unwrap();
        assert_eq!(x.chern_tangent.get(1).to_string(), "3*h");
        let bad = proj_data(2, Some((1, 2)));
        assert!(matches!(validate_diagonal(&bad), Err(Error::InvalidDiagonal { .. })));
    }

    #[test]
    fn symmetric_powers() {
        let p1 = proj(1);
        let p2 = proj(2);
        assert_eq!(symmetric_quotient(&p1, 2).unwrap().1.ranks().0, vec![1, 1, 1]);
        assert_eq!(symmetric_quotient(&p1, 3).unwrap().1.ranks().0, vec![1, 1, 1, 1]);
        assert_eq!(symmetric_quotient(&p2, 2).unwrap().1.ranks().0, vec![1, 1, 2, 1, 1]);
    }
}
