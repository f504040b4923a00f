use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::VarietyData;
use crate::error::{Error, Result};
use crate::linalg::{sparse_from_dense, Echelon, Matrix};
use crate::poly::{monomials_of_degree, rat, Generator, Polynomial, VarList};
use crate::ring::{subalgebra_closure, GradedSubspace, QuotientRing, RankTable, RingPresentation};

use super::{nested_model, NestedModel, PipelineConfig, PushPull};

/// Which classes `ξ` of `X` enter the generators `ξ(x₁)·e + ξ(x₀)·f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum XiRange {
    /// The ring generators of `X`.
    #[default]
    Generators,
    /// Every normal-form basis monomial of `X` of positive degree.
    BasisMonomials,
}

/// `A*(Hilb³ X)` as the image of `Π` inside the nested model.
#[derive(Clone, Debug)]
pub struct Hilb3Model {
    pub nested: NestedModel,
    pub pushpull: PushPull,
    pub subspace: GradedSubspace,
    /// Named generators of the subring.
    pub generators: Vec<(String, Polynomial)>,
    pub xi_range: XiRange,
}

pub fn hilb3_model(x: &VarietyData, config: &PipelineConfig, xi_range: XiRange) -> Result<Hilb3Model> {
    let nested = nested_model(x, config)?;
    hilb3_from_nested(nested, xi_range)
}

/// The named generating set: `S₃`-orbit sums of slot monomials, `e+f`, `ef`, and `ξ(x₁)e + ξ(x₀)f`.
pub fn hilb3_generators(model: &NestedModel, xi_range: XiRange) -> Vec<(String, Polynomial)> {
    let t = model.ring();
    let a = &model.variety.ring;
    let mut out = Vec::new();
    let mut seen = Echelon::new(0);
    let mut seen_degree = usize::MAX;
    for k in 1..=model.top_degree() {
        for m in model.slot_monomials(k) {
            let orbit = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]]
                .iter()
                .fold(Polynomial::zero(t.vars()), |acc, s| &acc + &model.permute_slots(&m, *s));
            let orbit = t.normal_form(&orbit);
            if orbit.is_zero() {
                continue;
            }
            if seen_degree != k {
                seen = Echelon::new(t.rank(k));
                seen_degree = k;
            }
            if seen.insert(&sparse_from_dense(&t.coords(&orbit, k))) {
                out.push((format!("sym({})", t.normal_form(&m)), orbit));
            }
        }
    }
    let (e, f) = (model.e(), model.f());
    out.push(("e+f".to_string(), t.normal_form(&(&e + &f))));
    out.push(("ef".to_string(), t.normal_form(&(&e * &f))));
    let xis: Vec<Polynomial> = match xi_range {
        XiRange::Generators => (0..a.vars().len()).map(|g| a.var(g)).collect(),
        XiRange::BasisMonomials => (1..=a.top_degree()).flat_map(|k| a.basis_classes(k)).collect(),
    };
    for xi in xis {
        let c = &(&model.slot(1, &xi) * &e) + &(&model.slot(0, &xi) * &f);
        let c = t.normal_form(&c);
        if !c.is_zero() {
            out.push((format!("({xi})(e+f)"), c));
        }
    }
    out
}

pub fn hilb3_from_nested(nested: NestedModel, xi_range: XiRange) -> Result<Hilb3Model> {
    let pushpull = PushPull::build(&nested)?;
    if let Some(k) = pushpull.projector_defect() {
        return Err(Error::InconsistentOperator {
            degree: k,
            detail: "Π² ≠ 3Π".into(),
        });
    }
    let t = nested.ring().clone();
    let mut image = GradedSubspace::zero(t.clone());
    for k in 0..=nested.top_degree() {
        for c in pushpull.image_classes(&nested, k) {
            image.insert(&c);
        }
    }
    let generators = hilb3_generators(&nested, xi_range);
    let classes: Vec<Polynomial> = generators.iter().map(|(_, c)| c.clone()).collect();
    let closure = subalgebra_closure(&t, &classes)?;
    if let Some((k, witness)) = image.first_difference(&closure) {
        return Err(Error::ImageClosureMismatch {
            degree: k,
            image_rank: image.rank(k),
            closure_rank: closure.rank(k),
            witness: witness.to_string(),
        });
    }
    Ok(Hilb3Model {
        nested,
        pushpull,
        subspace: image,
        generators,
        xi_range,
    })
}

impl Hilb3Model {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        self.nested.ring()
    }

    pub fn ranks(&self) -> RankTable {
        self.subspace.ranks()
    }

    pub fn apply(&self, c: &Polynomial) -> Result<Polynomial> {
        self.pushpull.apply(&self.nested, c)
    }

    /// Check `Π(w) = 3w` on every generator and on `samples` random products of generators.
    pub fn eigen_check(&self, samples: usize, seed: u64) -> Result<()> {
        let t = self.ring();
        let check = |what: &str, w: &Polynomial| -> Result<()> {
            let got = self.apply(w)?;
            let want = t.normal_form(&w.scale(&rat(3)));
            if got != want {
                let k = w.degrees().into_iter().max().unwrap_or(0) as usize;
                return Err(Error::InconsistentOperator {
                    degree: k,
                    detail: format!("Π({what}) = {got}, expected {want}"),
                });
            }
            Ok(())
        };
        for (name, g) in &self.generators {
            check(name, g)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let factors = rng.gen_range(2..=3);
            let mut p = t.one();
            let mut names = Vec::new();
            for _ in 0..factors {
                let (name, g) = self.generators.choose(&mut rng).expect("nonempty generator list");
                p = t.mul(&p, g);
                names.push(name.as_str());
            }
            check(&names.join("·"), &p)?;
        }
        Ok(())
    }

    /// Greedy choice of generators from the named list: a candidate is kept when it is not
    /// already a polynomial in the previously kept ones.
    pub fn minimal_generators(&self) -> Vec<(String, Polynomial)> {
        let t = self.ring();
        let mut chosen: Vec<(String, Polynomial)> = Vec::new();
        let mut span = GradedSubspace::zero(t.clone());
        span.insert(&t.one());
        let mut candidates: Vec<(usize, &(String, Polynomial))> = self
            .generators
            .iter()
            .filter_map(|g| g.1.homogeneous_degree().map(|k| (k as usize, g)))
            .collect();
        candidates.sort_by_key(|(k, _)| *k);
        for (k, cand) in candidates {
            if span.contains(&cand.1) {
                continue;
            }
            chosen.push(cand.clone());
            let classes: Vec<Polynomial> = chosen.iter().map(|(_, c)| c.clone()).collect();
            span = subalgebra_closure(t, &classes).expect("classes live in the ambient ring");
            debug_assert!(span.contains(&cand.1), "degree {k}");
        }
        chosen
    }
}

/// A presentation of the Hilb³ subring together with the images of its generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub ring: RingPresentation,
    /// Ambient class of each generator.
    pub images: Vec<Polynomial>,
    /// Descriptions of the generators as classes of the nested model.
    pub descriptions: Vec<String>,
}

/// Present the subring by the chosen generators: minimal relations, degree by degree up to `3d`.
///
/// Degree-0 generators are ignored. Generators are named `t1, t2, …` in the order given.
pub fn extract_presentation(h: &Hilb3Model, chosen: &[(String, Polynomial)]) -> Result<Presentation> {
    let t = h.ring();
    let top = h.nested.top_degree();
    let mut gens = Vec::new();
    let mut images = Vec::new();
    let mut descriptions = Vec::new();
    for (name, c) in chosen {
        let c = t.normal_form(c);
        if c.is_zero() {
            continue;
        }
        match c.homogeneous_degree() {
            Some(0) => continue,
            Some(k) => {
                if !h.subspace.contains(&c) {
                    return Err(Error::NotInModel {
                        degree: k as usize,
                        component: c.to_string(),
                    });
                }
                gens.push(Generator::new(format!("t{}", gens.len() + 1), k));
                images.push(c);
                descriptions.push(name.clone());
            }
            None => {
                return Err(Error::Inhomogeneous {
                    what: format!("generator `{name}`"),
                    degrees: c.degrees(),
                })
            }
        }
    }
    let vars = VarList::new(gens)?;
    let mut relations: Vec<Polynomial> = Vec::new();
    for k in 1..=top {
        let monos = monomials_of_degree(&vars, k as u32);
        let columns: Vec<Vec<_>> = monos
            .iter()
            .map(|m| {
                let p = Polynomial::term(&vars, m.clone(), rat(1));
                t.coords(&t.evaluate(&p, &images), k)
            })
            .collect();
        let map = Matrix::from_columns(t.rank(k), &columns);
        if map.rank() < h.subspace.rank(k) {
            return Err(Error::InsufficientGenerators { degree: k });
        }
        // Relations already implied in degree k by lower-degree ones.
        let index = |m: &crate::poly::Monomial| monos.iter().position(|x| x == m).expect("same degree");
        let mut implied = Echelon::new(monos.len());
        for r in &relations {
            let rk = r.homogeneous_degree().expect("homogeneous") as usize;
            for m in monomials_of_degree(&vars, (k - rk) as u32) {
                let prod = r * &Polynomial::term(&vars, m, rat(1));
                let mut v = vec![rat(0); monos.len()];
                for (mm, c) in prod.terms() {
                    v[index(mm)] = c.clone();
                }
                implied.insert_dense(&v);
            }
        }
        for kv in map.nullspace() {
            if implied.insert_dense(&kv) {
                let rel = monos
                    .iter()
                    .zip(&kv)
                    .fold(Polynomial::zero(&vars), |acc, (m, c)| {
                        &acc + &Polynomial::term(&vars, m.clone(), c.clone())
                    });
                relations.push(rel);
            }
        }
    }
    let ring = RingPresentation::new(format!("Hilb3({})", h.nested.variety.name), vars, relations, top)?;
    Ok(Presentation {
        ring,
        images,
        descriptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::builtin;

    #[test]
    fn curve_subring() {
        let h = hilb3_model(&builtin("P1").unwrap(), &PipelineConfig::default(), XiRange::Generators).unwrap();
        assert_eq!(h.ranks().0, vec![1, 1, 1, 1]);
        h.eigen_check(10, 7).unwrap();
        let ef = h.generators.iter().find(|(n, _)| n == "e+f").unwrap().clone();
        let p = extract_presentation(&h, &[("one".into(), h.ring().one()), ef]).unwrap();
        let q = QuotientRing::new(p.ring).unwrap();
        assert_eq!(q.rank_table().0, vec![1, 1, 1, 1]);
    }

    #[test]
    fn plane_subring() {
        let h = hilb3_model(&builtin("P2").unwrap(), &PipelineConfig::default(), XiRange::Generators).unwrap();
        assert_eq!(h.ranks().0, vec![1, 2, 5, 6, 5, 2, 1]);
        let gens = h.minimal_generators();
        let p = extract_presentation(&h, &gens).unwrap();
        let q = QuotientRing::new(p.ring).unwrap();
        assert_eq!(q.rank_table(), h.ranks());
    }
}
