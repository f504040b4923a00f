use std::sync::Arc;

use crate::construct::{
    blowup, tensor_power, BlowupData, ChernLift, ChernVector, ExceptionalBlowup, TensorProduct, VarietyData,
};
use crate::error::{Error, Result};
use crate::poly::{rat, Monomial, Polynomial, Rational};
use crate::ring::{induced_map, subalgebra_closure, GradedLinearMap, GradedSubspace, GroupAction, QuotientRing};

use super::{hilb2_model, Hilb2Model, PipelineConfig, Sign};

/// Model of `A*(Hilb^{[2,3]} X)`.
#[derive(Clone, Debug)]
pub struct NestedModel {
    pub variety: VarietyData,
    pub config: PipelineConfig,
    pub dimension: usize,
    /// `A*(X)^{⊗3}`.
    pub cube: TensorProduct,
    /// First blowup `B = Bl_{X×Δ₁₂}(X³)`, generator `e`.
    pub first: ExceptionalBlowup,
    pub hilb2: Hilb2Model,
    /// Restriction from `B` to the universal family `Z₂`.
    pub to_family: GradedLinearMap,
    /// Second blowup `T`, generator `f`: the ambient ring of the model.
    pub second: ExceptionalBlowup,
    pub swap: GroupAction,
    /// Swap invariants of `T`: the model of the nested Hilbert scheme.
    pub w: GradedSubspace,
    /// Chern classes of the normal bundle of the universal family, over `B`.
    pub normal_chern: ChernVector,
    /// `slot_vars[s][g]`: index in `T` of generator `g` of `X` placed in slot `s`.
    pub slot_vars: [Vec<usize>; 3],
    pub e_index: usize,
    pub f_index: usize,
}

/// `c(N) = c(T_X)(slot 0) · (1 - 2s·e) · (1 + s·e + s²e² + …)`, truncated at degree `d`.
pub fn z2_normal_chern(chern_slot0: &[Polynomial], e: &Polynomial, sign: Sign, d: usize) -> Result<ChernVector> {
    let vars = e.vars();
    let se = e.scale(&rat(sign.value()));
    let one = Polynomial::one(vars);
    let mut geometric = one.clone();
    let mut power = one.clone();
    for _ in 1..=d {
        power = &power * &se;
        geometric = &geometric + &power;
    }
    let factor = &(&one - &se.scale(&rat(2))) * &geometric;
    let total = chern_slot0
        .iter()
        .fold(Polynomial::zero(vars), |acc, c| &acc + c);
    let product = &total * &factor;
    let mut classes = Vec::with_capacity(d + 1);
    for j in 0..=d {
        classes.push(product.component(j as u32));
    }
    ChernVector::new(classes)
}

pub fn nested_model(x: &VarietyData, config: &PipelineConfig) -> Result<NestedModel> {
    let d = x.dimension;
    if d == 0 {
        return Err(Error::DimensionTooSmall);
    }
    crate::construct::validate_diagonal(x)?;
    let n = x.vars().len();
    let cube = tensor_power(&x.ring, 3)?;
    let sq = &x.square;

    // B: blow up X³ along X × Δ₁₂.
    let onto_partial_diagonal: Vec<Polynomial> = [0usize, 1, 1]
        .iter()
        .flat_map(|&s| (0..n).map(move |g| (s, g)))
        .map(|(s, g)| sq.ring.var(sq.embeddings[s][g]))
        .collect();
    let delta12 = induced_map(&cube.ring, &sq.ring, &onto_partial_diagonal)?;
    let first = blowup(BlowupData {
        base: &cube.ring,
        restriction: &delta12,
        chern: ChernLift::Given(x.chern_tangent.classes().iter().map(|c| cube.place(1, c)).collect()),
        class_y: cube.place_pair(1, 2, &x.diagonal_terms),
        kernel_domain: None,
        var_name: "e",
        signs: config.chern_signs,
    })?;
    let b = first.ring.clone();
    let b_swap = {
        let mut p = cube.factor_permutation(&[0, 2, 1]);
        p.push(first.e);
        GroupAction::from_permutations(&b, &[p], 2)?
    };
    let b_invariants = b_swap.invariant_subspace();

    // Z₂ and the restriction B → Z₂: slots 0 and 1 go to the first factor, slot 2 to the second.
    let hilb2 = hilb2_model(x, config)?;
    let z = hilb2.ring().clone();
    let zsq = &x.square;
    let mut to_family_images: Vec<Polynomial> = [0usize, 0, 1]
        .iter()
        .flat_map(|&s| (0..n).map(move |g| (s, g)))
        .map(|(s, g)| z.var(zsq.embeddings[s][g]))
        .collect();
    to_family_images.push(z.var(hilb2.blowup.e));
    let to_family = induced_map(&b, &z, &to_family_images)?;

    // T: blow up B along the preimage of Z₂, imposing only swap-invariant kernel classes.
    let e_b = Polynomial::var(b.vars(), first.e);
    let chern0: Vec<Polynomial> = x
        .chern_tangent
        .classes()
        .iter()
        .map(|c| cube.place(0, c).embed(b.vars(), &(0..cube.ring.vars().len()).collect::<Vec<_>>()))
        .collect();
    let normal_chern = z2_normal_chern(&chern0, &e_b, config.eqcz_sign, d)?;
    let cube_to_b: Vec<usize> = (0..cube.ring.vars().len()).collect();
    let family_class = (&cube.place_pair(0, 1, &x.diagonal_terms) + &cube.place_pair(0, 2, &x.diagonal_terms))
        .embed(b.vars(), &cube_to_b)
        .scale(&config.rel3_constant());
    let second = blowup(BlowupData {
        base: &b,
        restriction: &to_family,
        chern: ChernLift::Given(normal_chern.classes().iter().map(|c| b.normal_form(c)).collect()),
        class_y: family_class,
        kernel_domain: Some(&b_invariants),
        var_name: "f",
        signs: config.chern_signs,
    })?;
    let t = second.ring.clone();
    let slot_vars = [0, 1, 2].map(|s| cube.embeddings[s].clone());
    let e_index = first.e;
    let f_index = second.e;
    let swap = {
        let mut p = cube.factor_permutation(&[0, 2, 1]);
        p.push(e_index);
        p.push(f_index);
        GroupAction::from_permutations(&t, &[p], 2)?
    };
    let w = swap.invariant_subspace();
    let model = NestedModel {
        variety: x.clone(),
        config: *config,
        dimension: d,
        cube,
        first,
        hilb2,
        to_family,
        second,
        swap,
        w,
        normal_chern,
        slot_vars,
        e_index,
        f_index,
    };
    model.check_generated()?;
    Ok(model)
}

impl NestedModel {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.second.ring
    }

    pub fn e(&self) -> Polynomial {
        Polynomial::var(self.ring().vars(), self.e_index)
    }

    pub fn f(&self) -> Polynomial {
        Polynomial::var(self.ring().vars(), self.f_index)
    }

    pub fn top_degree(&self) -> usize {
        3 * self.dimension
    }

    /// Place a class of `X` into slot `s`.
    pub fn slot(&self, s: usize, p: &Polynomial) -> Polynomial {
        p.embed(self.ring().vars(), &self.slot_vars[s])
    }

    /// Place a monomial of `X` into slot `s`.
    pub fn slot_monomial(&self, s: usize, m: &Monomial) -> Polynomial {
        self.slot(s, &Polynomial::term(self.variety.vars(), m.clone(), rat(1)))
    }

    /// `p(x₁ + x₂ - x₀)`: generator-wise substitution `g ↦ g₁ + g₂ - g₀`.
    pub fn residual_lift(&self, p: &Polynomial) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.variety.vars().len())
            .map(|g| {
                let v = |s: usize| Polynomial::var(self.ring().vars(), self.slot_vars[s][g]);
                &(&v(1) + &v(2)) - &v(0)
            })
            .collect();
        self.ring().evaluate(p, &images)
    }

    /// Apply a permutation of the three slots (slot `i` goes to `sigma[i]`), fixing `e` and `f`.
    pub fn permute_slots(&self, p: &Polynomial, sigma: [usize; 3]) -> Polynomial {
        let mut perm = self.cube.factor_permutation(&sigma);
        perm.push(self.e_index);
        perm.push(self.f_index);
        self.ring().normal_form(&p.embed(self.ring().vars(), &perm))
    }

    /// The classes whose subalgebra is expected to be all of `W`: swap-symmetric slot
    /// monomials, `e`, `f`, `g(x₁)·e` and `g(x₀)·f` for each generator `g` of `X`.
    pub fn generating_set(&self) -> Vec<Polynomial> {
        let t = self.ring();
        let mut out = Vec::new();
        for k in 1..=self.top_degree() {
            for m in self.slot_monomials(k) {
                let s = &m + &self.permute_slots(&m, [0, 2, 1]);
                out.push(t.normal_form(&s));
            }
        }
        out.push(self.e());
        out.push(self.f());
        for g in 0..self.variety.vars().len() {
            let gv = Polynomial::var(self.variety.vars(), g);
            out.push(t.normal_form(&(&self.slot(1, &gv) * &self.e())));
            out.push(t.normal_form(&(&self.slot(0, &gv) * &self.f())));
        }
        out
    }

    /// Products `m₀(x₀)m₁(x₁)m₂(x₂)` of normal-form basis monomials of `X`, of total degree `k`.
    pub fn slot_monomials(&self, k: usize) -> Vec<Polynomial> {
        let a = &self.variety.ring;
        let mut out = Vec::new();
        for k0 in 0..=k.min(self.dimension) {
            for k1 in 0..=(k - k0).min(self.dimension) {
                let k2 = k - k0 - k1;
                if k2 > self.dimension {
                    continue;
                }
                for m0 in a.degree_basis(k0).expect("in range").basis_monomials() {
                    for m1 in a.degree_basis(k1).expect("in range").basis_monomials() {
                        for m2 in a.degree_basis(k2).expect("in range").basis_monomials() {
                            let p = &(&self.slot_monomial(0, m0) * &self.slot_monomial(1, m1))
                                * &self.slot_monomial(2, m2);
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    /// Check that the swap invariants coincide with the subalgebra generated by `generating_set`.
    fn check_generated(&self) -> Result<()> {
        let closure = subalgebra_closure(self.ring(), &self.generating_set())?;
        if let Some((k, witness)) = self.w.first_difference(&closure) {
            return Err(Error::ModelCheck(format!(
                "swap invariants (rank {}) differ from the generated subalgebra (rank {}) in degree {k}; witness `{witness}`",
                self.w.rank(k),
                closure.rank(k)
            )));
        }
        Ok(())
    }

    /// Membership in `W`; on failure names the first offending component.
    pub fn check_in_model(&self, c: &Polynomial) -> Result<()> {
        for (k, part) in c.homogeneous_components() {
            let k = k as usize;
            if k > self.top_degree() {
                continue;
            }
            if !self.w.contains(&part) {
                return Err(Error::NotInModel {
                    degree: k,
                    component: self.ring().normal_form(&part).to_string(),
                });
            }
        }
        Ok(())
    }

    /// The defining relations of the ambient ring, grouped by role.
    pub fn named_relations(&self) -> Vec<(String, Polynomial)> {
        let t = self.ring();
        let b_to_t: Vec<usize> = (0..self.first.ring.vars().len()).collect();
        let cube_to_t: Vec<usize> = (0..self.cube.ring.vars().len()).collect();
        let mut out = Vec::new();
        for r in &self.cube.ring.presentation().relations {
            out.push(("slot".to_string(), r.embed(t.vars(), &cube_to_t)));
        }
        let e = self.e();
        let f = self.f();
        let n = self.variety.vars().len();
        for g in 0..n {
            let gv = Polynomial::var(self.variety.vars(), g);
            out.push((
                "e-support".to_string(),
                &(&self.slot(1, &gv) - &self.slot(2, &gv)) * &e,
            ));
        }
        out.push(("e-exceptional".to_string(), self.first.relation.embed(t.vars(), &b_to_t)));
        for k in 1..self.top_degree() {
            for kc in self.second.kernel.basis_classes(k) {
                out.push(("f-support".to_string(), &kc.embed(t.vars(), &b_to_t) * &f));
            }
        }
        out.push(("f-exceptional".to_string(), self.second.relation.clone()));
        out
    }

    /// A random element of `W` of degree `k`, with small integer coefficients.
    pub fn random_class<R: rand::Rng>(&self, k: usize, rng: &mut R) -> Polynomial {
        let mut out = Polynomial::zero(self.ring().vars());
        for b in self.w.basis_classes(k) {
            let c: i64 = rng.gen_range(-3..=3);
            out = &out + &b.scale(&Rational::from_integer(c.into()));
        }
        out
    }
}
