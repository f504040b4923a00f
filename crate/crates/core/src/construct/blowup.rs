use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{rat, Generator, Polynomial, Rational, VarList};
use crate::ring::{image_kernel, induced_map, GradedLinearMap, GradedSubspace, QuotientRing, RingPresentation};

use super::ChernVector;

/// Sign pattern of the Chern terms in the exceptional-class relation.
///
/// `Literal` uses `e^d + Σ_j c_{d-j} e^j + (-1)^d [Y]`. `Alternating` uses
/// `e^d + Σ_j (-1)^{d-j} c_{d-j} e^j + (-1)^d [Y]`. They differ as soon as a Chern term
/// of odd degree appears, so for every `d ≥ 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChernSigns {
    #[default]
    Literal,
    Alternating,
}

/// How the Chern classes of the normal bundle reach the ambient ring.
#[derive(Clone, Debug)]
pub enum ChernLift {
    /// Classes on the center; lifted through the restriction map by back-substitution.
    Solve(ChernVector),
    /// Lifts already written over the ambient generators, `ĉ_0..ĉ_r`.
    Given(Vec<Polynomial>),
}

impl ChernLift {
    fn codimension(&self) -> usize {
        match self {
            ChernLift::Solve(c) => c.rank(),
            ChernLift::Given(v) => v.len().saturating_sub(1),
        }
    }
}

/// Input of a blowup along a center `Y ⊂ X`.
pub struct BlowupData<'a> {
    pub base: &'a Arc<QuotientRing>,
    /// Restriction `A*(X) → A*(Y)`; must be surjective.
    pub restriction: &'a GradedLinearMap,
    pub chern: ChernLift,
    /// `[Y]` as a class on `X`, of degree equal to the codimension.
    pub class_y: Polynomial,
    /// Only kernel elements inside this subspace annihilate `e`.
    pub kernel_domain: Option<&'a GradedSubspace>,
    pub var_name: &'a str,
    pub signs: ChernSigns,
}

#[derive(Clone, Debug)]
pub struct ExceptionalBlowup {
    pub ring: Arc<QuotientRing>,
    pub base: Arc<QuotientRing>,
    /// Index of the exceptional generator.
    pub e: usize,
    pub codimension: usize,
    pub pullback: GradedLinearMap,
    /// The exceptional-class relation, over `ring`'s generators.
    pub relation: Polynomial,
    /// Kernel of the restriction map (intersected with the domain, if any).
    pub kernel: GradedSubspace,
    /// Lifted Chern classes `ĉ_0..ĉ_r` over the base generators.
    pub chern_lifts: Vec<Polynomial>,
}

pub fn blowup(data: BlowupData<'_>) -> Result<ExceptionalBlowup> {
    let x = data.base;
    let iota = data.restriction;
    if !Arc::ptr_eq(&iota.source, x) {
        return Err(Error::MismatchedVariables);
    }
    let y = iota.target.clone();
    let codim = data.chern.codimension();
    if codim == 0 {
        return Err(Error::Unsupported("blowup along a center of codimension 0".into()));
    }
    if !data.class_y.is_zero() && data.class_y.homogeneous_degree() != Some(codim as u32) {
        return Err(Error::WrongDegree {
            what: format!("center class `{}`", data.class_y),
            expected: codim as u32,
            found: data.class_y.degrees().into_iter().max().unwrap_or(0),
        });
    }

    let (image, kernel) = image_kernel(iota);
    for k in 0..=y.top_degree() {
        if image.rank(k) != y.rank(k) {
            return Err(Error::NotSurjective {
                degree: k,
                rank: image.rank(k),
                target: y.rank(k),
            });
        }
    }
    let kernel = match data.kernel_domain {
        Some(dom) => kernel.intersect(dom),
        None => kernel,
    };

    let lifts: Vec<Polynomial> = match &data.chern {
        ChernLift::Given(v) => v.clone(),
        ChernLift::Solve(c) => (0..=codim)
            .map(|j| {
                if j > y.top_degree() || j > x.top_degree() {
                    return Ok(Polynomial::zero(x.vars()));
                }
                let target = y.coords(c.get(j), j);
                let sol = iota.block(j).solve(&target).ok_or(Error::NotSurjective {
                    degree: j,
                    rank: image.rank(j),
                    target: y.rank(j),
                })?;
                Ok(x.from_coords(j, &sol))
            })
            .collect::<Result<_>>()?,
    };

    let mut gens = x.vars().gens().to_vec();
    gens.push(Generator::new(data.var_name, 1));
    let vars = VarList::new(gens)?;
    let nx = x.vars().len();
    let emb: Vec<usize> = (0..nx).collect();
    let e = Polynomial::var(&vars, nx);

    let mut relations: Vec<Polynomial> = x
        .presentation()
        .relations
        .iter()
        .map(|r| r.embed(&vars, &emb))
        .collect();
    for k in 1..x.top_degree() {
        for kc in kernel.basis_classes(k) {
            relations.push(&kc.embed(&vars, &emb) * &e);
        }
    }
    let mut rel = e.pow(codim as u32);
    for j in 1..codim {
        let sign = match data.signs {
            ChernSigns::Literal => 1,
            ChernSigns::Alternating => {
                if (codim - j).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        };
        let c = lifts[codim - j].embed(&vars, &emb).scale(&rat(sign));
        rel = &rel + &(&c * &e.pow(j as u32));
    }
    let ysign = if codim.is_multiple_of(2) { 1 } else { -1 };
    rel = &rel + &data.class_y.embed(&vars, &emb).scale(&rat(ysign));
    relations.push(rel.clone());

    let ring = QuotientRing::new(RingPresentation::new(
        format!("Bl({})", x.name()),
        vars,
        relations,
        x.top_degree(),
    )?)?;
    let pullback = induced_map(x, &ring, &(0..nx).map(|i| ring.var(i)).collect::<Vec<_>>())?;
    Ok(ExceptionalBlowup {
        ring,
        base: x.clone(),
        e: nx,
        codimension: codim,
        pullback,
        relation: rel,
        kernel,
        chern_lifts: lifts,
    })
}

impl ExceptionalBlowup {
    pub fn exceptional(&self) -> Polynomial {
        self.ring.var(self.e)
    }

    /// `π_*`: the projection onto `π^* A*(X)` along the classes `e^j · π^*x`, `1 ≤ j < codim`.
    pub fn pushforward(&self) -> Result<GradedLinearMap> {
        let b = &self.ring;
        let x = &self.base;
        let e = Polynomial::var(b.vars(), self.e);
        let mut blocks = Vec::with_capacity(b.top_degree() + 1);
        for k in 0..=b.top_degree() {
            let nb = b.rank(k);
            let nx = x.rank(k);
            let mut cols = Vec::new();
            for j in 0..nx {
                cols.push(self.pullback.block(k).column(j));
            }
            for j in 1..self.codimension.min(k + 1) {
                for xc in x.basis_classes(k - j) {
                    let cls = b.mul(&self.pullback.apply(&xc), &e.pow(j as u32));
                    cols.push(b.coords(&cls, k));
                }
            }
            let m = Matrix::from_columns(nb, &cols);
            let pull_rank = Matrix::from_columns(nb, &cols[..nx]).rank();
            let comp_rank = Matrix::from_columns(nb, &cols[nx..]).rank();
            if m.rank() != nb || pull_rank != nx || pull_rank + comp_rank != nb {
                return Err(Error::ModelCheck(format!(
                    "blowup decomposition fails in degree {k}: total {nb}, pullback {pull_rank}, complement {comp_rank}"
                )));
            }
            let mut block = Matrix::zeros(nx, nb);
            for c in 0..nb {
                let mut unit = vec![Rational::zero(); nb];
                unit[c] = Rational::from_integer(1.into());
                let sol = m.solve(&unit).expect("columns span the degree");
                for (r, v) in sol.into_iter().take(nx).enumerate() {
                    block.set(r, c, v);
                }
            }
            blocks.push(block);
        }
        Ok(GradedLinearMap::from_blocks(b.clone(), x.clone(), 0, blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{tensor_power, ChernVector};
    use crate::poly::VarList;

    fn proj(n: u32) -> Arc<QuotientRing> {
        let v = VarList::new(vec![Generator::new("h", 1)]).unwrap();
        let h = Polynomial::var(&v, 0);
        QuotientRing::new(RingPresentation::new(format!("P{n}"), v, vec![h.pow(n + 1)], n as usize).unwrap())
            .unwrap()
    }

    fn point() -> Arc<QuotientRing> {
        QuotientRing::new(RingPresentation::new("pt", VarList::new(vec![]).unwrap(), vec![], 0).unwrap()).unwrap()
    }

    #[test]
    fn plane_blown_up_at_a_point() {
        let p2 = proj(2);
        let pt = point();
        let iota = induced_map(&p2, &pt, &[Polynomial::zero(pt.vars())]).unwrap();
        let bl = blowup(BlowupData {
            base: &p2,
            restriction: &iota,
            chern: ChernLift::Solve(ChernVector::trivial(pt.vars(), 2)),
            class_y: p2.var(0).pow(2),
            kernel_domain: None,
            var_name: "e",
            signs: ChernSigns::Literal,
        })
        .unwrap();
        assert_eq!(bl.ring.rank_table().0, vec![1, 2, 1]);
        assert!(bl.ring.is_zero(&bl.relation));
        let h = bl.ring.var(0);
        let e = bl.exceptional();
        assert!(bl.ring.is_zero(&(&h * &e)));
        assert!(bl.ring.is_zero(&(&e.pow(2) + &h.pow(2))));
        let push = bl.pushforward().unwrap();
        assert!(push.apply(&e).is_zero());
        assert_eq!(push.apply(&h), p2.var(0));
    }

    #[test]
    fn blowup_of_the_diagonal_in_p2_squared() {
        let p2 = proj(2);
        let sq = tensor_power(&p2, 2).unwrap();
        let h = p2.var(0);
        let iota = induced_map(&sq.ring, &p2, &[h.clone(), h.clone()]).unwrap();
        let one = Polynomial::one(p2.vars());
        let c = ChernVector::from_total(&(&(&one + &h.scale(&rat(3))) + &h.pow(2).scale(&rat(3))), 2).unwrap();
        let terms: Vec<_> = (0..=2).map(|i| (h.pow(2 - i), h.pow(i))).collect();
        let bl = blowup(BlowupData {
            base: &sq.ring,
            restriction: &iota,
            chern: ChernLift::Solve(c),
            class_y: sq.place_pair(0, 1, &terms),
            kernel_domain: None,
            var_name: "e",
            signs: ChernSigns::Literal,
        })
        .unwrap();
        assert_eq!(bl.ring.rank_table().0, vec![1, 3, 4, 3, 1]);
        let push = bl.pushforward().unwrap();
        let id = bl.pullback.then(&push);
        for k in 0..=4 {
            assert_eq!(*id.block(k), Matrix::identity(sq.ring.rank(k)));
        }
    }

    #[test]
    fn divisor_center_leaves_ring_unchanged() {
        let p1 = proj(1);
        let sq = tensor_power(&p1, 2).unwrap();
        let h = p1.var(0);
        let iota = induced_map(&sq.ring, &p1, &[h.clone(), h.clone()]).unwrap();
        let c = ChernVector::from_total(&(&Polynomial::one(p1.vars()) + &h.scale(&rat(2))), 1).unwrap();
        let delta = &sq.ring.var(0) + &sq.ring.var(1);
        let bl = blowup(BlowupData {
            base: &sq.ring,
            restriction: &iota,
            chern: ChernLift::Solve(c),
            class_y: delta.clone(),
            kernel_domain: None,
            var_name: "e",
            signs: ChernSigns::Literal,
        })
        .unwrap();
        assert_eq!(bl.ring.rank_table().0, vec![1, 2, 1]);
        let e = bl.exceptional();
        assert!(bl.ring.is_zero(&(&e - &bl.pullback.apply(&delta))));
    }

    #[test]
    fn non_surjective_restriction_rejected() {
        let p1 = proj(1);
        let p2 = proj(2);
        let iota = induced_map(&p1, &p2, &[Polynomial::zero(p2.vars())]).unwrap();
        let err = blowup(BlowupData {
            base: &p1,
            restriction: &iota,
            chern: ChernLift::Solve(ChernVector::trivial(p2.vars(), 1)),
            class_y: p1.var(0),
            kernel_domain: None,
            var_name: "e",
            signs: ChernSigns::Literal,
        })
        .unwrap_err();
        assert!(matches!(err, Error::NotSurjective { degree: 1, .. }));
    }
}
