use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Generator, Polynomial, VarList};
use crate::ring::{induced_map, GradedLinearMap, QuotientRing, RingPresentation};

use super::ChernVector;

/// `A*(P(N)) = A*(Y)[h]/(h^r + c_1 h^{r-1} + … + c_r)` with its structure maps.
#[derive(Clone, Debug)]
pub struct ProjectiveBundle {
    pub ring: Arc<QuotientRing>,
    /// Index of the tautological generator `h` in `ring`.
    pub h: usize,
    pub rank: usize,
    pub pullback: GradedLinearMap,
    /// Degree shift `-(r-1)`: takes the coefficient of `h^{r-1}`.
    pub pushforward: GradedLinearMap,
}

pub fn projective_bundle(y: &Arc<QuotientRing>, n: &ChernVector, h_name: &str) -> Result<ProjectiveBundle> {
    let r = n.rank();
    if r == 0 {
        return Err(Error::Unsupported("projective bundle of a rank-0 bundle".into()));
    }
    if n.get(0).vars() != y.vars() {
        return Err(Error::MismatchedVariables);
    }
    let mut gens = y.vars().gens().to_vec();
    gens.push(Generator::new(h_name, 1));
    let vars = VarList::new(gens)?;
    let nv = y.vars().len();
    let emb: Vec<usize> = (0..nv).collect();
    let h = Polynomial::var(&vars, nv);
    let mut relations: Vec<Polynomial> = y
        .presentation()
        .relations
        .iter()
        .map(|rel| rel.embed(&vars, &emb))
        .collect();
    let mut bundle_rel = Polynomial::zero(&vars);
    for j in 0..=r {
        bundle_rel = &bundle_rel + &(&n.get(j).embed(&vars, &emb) * &h.pow((r - j) as u32));
    }
    relations.push(bundle_rel);
    let top = y.top_degree() + r - 1;
    let ring = QuotientRing::new(RingPresentation::new(
        format!("P({})", y.name()),
        vars.clone(),
        relations,
        top,
    )?)?;
    let pullback = induced_map(y, &ring, &(0..nv).map(|i| ring.var(i)).collect::<Vec<_>>())?;

    // Columns y·h^j, j = 0..r-1, form a basis of each degree; invert to read off the h^{r-1} part.
    let mut blocks = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut cols = Vec::new();
        let mut tags = Vec::new();
        for j in 0..r.min(k + 1) {
            if k - j > y.top_degree() {
                continue;
            }
            for (i, b) in y.basis_classes(k - j).into_iter().enumerate() {
                let cls = &b.embed(&vars, &emb) * &h.pow(j as u32);
                cols.push(ring.coords(&cls, k));
                tags.push((j, i));
            }
        }
        let m = Matrix::from_columns(ring.rank(k), &cols);
        let inv = m.inverse().ok_or_else(|| {
            Error::ModelCheck(format!(
                "projective bundle: y·h^j classes are not a basis in degree {k}"
            ))
        })?;
        let out_rows = if k + 1 >= r { y.rank(k + 1 - r) } else { 0 };
        let mut block = Matrix::zeros(out_rows, ring.rank(k));
        for (row, &(j, i)) in tags.iter().enumerate() {
            if j == r - 1 {
                for c in 0..ring.rank(k) {
                    block.set(i, c, inv.get(row, c).clone());
                }
            }
        }
        blocks.push(block);
    }
    let pushforward = GradedLinearMap::from_blocks(ring.clone(), y.clone(), 1 - r as i64, blocks);
    Ok(ProjectiveBundle {
        ring,
        h: nv,
        rank: r,
        pullback,
        pushforward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;

    fn point() -> Arc<QuotientRing> {
        let v = VarList::new(vec![]).unwrap();
        QuotientRing::new(RingPresentation::new("pt", v, vec![], 0).unwrap()).unwrap()
    }

    fn p1() -> Arc<QuotientRing> {
        let v = VarList::new(vec![Generator::new("h", 1)]).unwrap();
        let h = Polynomial::var(&v, 0);
        QuotientRing::new(RingPresentation::new("P1", v, vec![h.pow(2)], 1).unwrap()).unwrap()
    }

    #[test]
    fn plane_over_a_point() {
        let pt = point();
        let b = projective_bundle(&pt, &ChernVector::trivial(pt.vars(), 3), "h").unwrap();
        assert_eq!(b.ring.rank_table().0, vec![1, 1, 1]);
        let h2 = b.ring.var(b.h).pow(2);
        assert_eq!(b.pushforward.apply(&h2), Polynomial::one(pt.vars()));
        assert!(b.pushforward.apply(&b.ring.var(b.h)).is_zero());
    }

    #[test]
    fn trivial_line_bundle_pair_over_p1() {
        let y = p1();
        let b = projective_bundle(&y, &ChernVector::trivial(y.vars(), 2), "t").unwrap();
        assert_eq!(b.ring.rank_table().0, vec![1, 2, 1]);
        let t = b.ring.var(b.h);
        let h = b.ring.var(0);
        assert_eq!(b.pushforward.apply(&(&h * &t)), y.var(0));
        assert!(b.pushforward.apply(&h).is_zero());
    }
}
