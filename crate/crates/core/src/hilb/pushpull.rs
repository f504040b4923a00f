use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{sparse_from_dense, Echelon, Matrix};
use crate::poly::{rat, Monomial, Polynomial, Rational};

use super::NestedModel;

/// Elements of `W` on which the push-pull operator has a closed form.
///
/// Monomials `a`, `b` are basis monomials of `X`; slot indices follow the nested model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypedElement {
    /// `m + σ₁₂(m)` for a slot monomial `m`.
    Sym(Polynomial),
    /// `a(x₀)·b(x₁)·e^k`.
    E { a: Monomial, b: Monomial, k: u32 },
    /// `a(x₀)·b(x₁+x₂-x₀)·f^j`.
    F { a: Monomial, b: Monomial, j: u32 },
    /// `a(x₀)·e^k·f^j`.
    Mixed { a: Monomial, k: u32, j: u32 },
}

impl fmt::Display for TypedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypedElement::Sym(p) => write!(f, "sym({p})"),
            TypedElement::E { a, b, k } => write!(f, "E({:?}, {:?}, {k})", a.0, b.0),
            TypedElement::F { a, b, j } => write!(f, "F({:?}, {:?}, {j})", a.0, b.0),
            TypedElement::Mixed { a, k, j } => write!(f, "M({:?}, {k}, {j})", a.0),
        }
    }
}

/// Sum `Σ_{i=1}^{n-1} e^i f^{n-i}`.
fn interior_sum(e: &Polynomial, f: &Polynomial, n: u32) -> Polynomial {
    (1..n).fold(Polynomial::zero(e.vars()), |acc, i| &acc + &(&e.pow(i) * &f.pow(n - i)))
}

impl NestedModel {
    fn monomial_class(&self, m: &Monomial) -> Polynomial {
        Polynomial::term(self.variety.vars(), m.clone(), rat(1))
    }

    /// The class of a typed element in the ambient ring.
    pub fn typed_value(&self, t: &TypedElement) -> Polynomial {
        let (e, f) = (self.e(), self.f());
        let raw = match t {
            TypedElement::Sym(s) => s.clone(),
            TypedElement::E { a, b, k } => {
                &(&self.slot(0, &self.monomial_class(a)) * &self.slot(1, &self.monomial_class(b))) * &e.pow(*k)
            }
            TypedElement::F { a, b, j } => {
                let bt = self.residual_lift(&self.monomial_class(b));
                &(&self.slot(0, &self.monomial_class(a)) * &bt) * &f.pow(*j)
            }
            TypedElement::Mixed { a, k, j } => {
                &(&self.slot(0, &self.monomial_class(a)) * &e.pow(*k)) * &f.pow(*j)
            }
        };
        self.ring().normal_form(&raw)
    }

    /// The closed-form value of the push-pull operator on a typed element.
    pub fn typed_rule(&self, t: &TypedElement) -> Polynomial {
        let (e, f) = (self.e(), self.f());
        let raw = match t {
            TypedElement::Sym(s) => {
                let mut out = s.clone();
                out = &out + &self.permute_slots(s, [1, 0, 2]);
                &out + &self.permute_slots(s, [2, 1, 0])
            }
            TypedElement::E { a, b, k } => {
                let (a, b) = (self.monomial_class(a), self.monomial_class(b));
                let a0b1 = &self.slot(0, &a) * &self.slot(1, &b);
                let b0at = &self.slot(0, &b) * &self.residual_lift(&a);
                let a0b0 = &self.slot(0, &a) * &self.slot(0, &b);
                let first = &a0b1 * &e.pow(*k);
                let second = &b0at * &f.pow(*k);
                &(&first + &second) - &(&a0b0 * &interior_sum(&e, &f, *k))
            }
            TypedElement::F { a, b, j } => {
                let (a, b) = (self.monomial_class(a), self.monomial_class(b));
                let b0a1 = &self.slot(0, &b) * &self.slot(1, &a);
                let a0bt = &self.slot(0, &a) * &self.residual_lift(&b);
                let a0b0 = &self.slot(0, &a) * &self.slot(0, &b);
                let first = (&b0a1 * &e.pow(*j)).scale(&rat(2));
                let second = (&a0bt * &f.pow(*j)).scale(&rat(2));
                &(&first + &second) + &(&a0b0 * &interior_sum(&e, &f, *j))
            }
            TypedElement::Mixed { a, k, j } => {
                let a0 = self.slot(0, &self.monomial_class(a));
                let (k, j) = (*k, *j);
                if k == j {
                    (&(&a0 * &e.pow(k)) * &f.pow(j)).scale(&rat(3))
                } else if j > k {
                    let l = j - k;
                    let tail = &(&e.pow(l).scale(&rat(2)) + &f.pow(l).scale(&rat(2))) + &interior_sum(&e, &f, l);
                    &(&a0 * &(&e * &f).pow(k)) * &tail
                } else {
                    let l = k - j;
                    let tail = &(&e.pow(l) + &f.pow(l)) - &interior_sum(&e, &f, l);
                    &(&a0 * &(&e * &f).pow(j)) * &tail
                }
            }
        };
        self.ring().normal_form(&raw)
    }

    /// Typed elements of degree `k` whose values span `W` in that degree.
    pub fn typed_spanning_set(&self, k: usize) -> Vec<TypedElement> {
        let mut out = Vec::new();
        for m in self.slot_monomials(k) {
            let s = &m + &self.permute_slots(&m, [0, 2, 1]);
            out.push(TypedElement::Sym(self.ring().normal_form(&s)));
        }
        let d = self.dimension;
        let a = &self.variety.ring;
        let basis = |deg: usize| -> Vec<Monomial> {
            if deg > d {
                return Vec::new();
            }
            a.degree_basis(deg).expect("in range").basis_monomials().cloned().collect()
        };
        for p in 1..d {
            if p > k {
                break;
            }
            let rest = k - p;
            for da in 0..=rest {
                for ma in basis(da) {
                    for mb in basis(rest - da) {
                        out.push(TypedElement::E { a: ma.clone(), b: mb.clone(), k: p as u32 });
                        out.push(TypedElement::F { a: ma.clone(), b: mb, j: p as u32 });
                    }
                }
            }
        }
        for ek in 1..d {
            for fj in 1..d {
                if ek + fj > k {
                    continue;
                }
                for ma in basis(k - ek - fj) {
                    out.push(TypedElement::Mixed { a: ma, k: ek as u32, j: fj as u32 });
                }
            }
        }
        out
    }

    /// Coordinates of `c` in the echelon basis of `W` in degree `k`.
    pub fn w_coords(&self, c: &Polynomial, k: usize) -> Option<Vec<Rational>> {
        let v = sparse_from_dense(&self.ring().coords(c, k));
        self.w.part(k).coordinates(&v)
    }
}

/// The push-pull operator `Π = π_* π^*` on `W`, one matrix per degree in the echelon basis.
#[derive(Clone, Debug)]
pub struct PushPull {
    matrices: Vec<Matrix>,
}

impl PushPull {
    /// Assemble `Π` from the typed rules and check that the rules define a linear map.
    pub fn build(model: &NestedModel) -> Result<PushPull> {
        let mut matrices = Vec::with_capacity(model.top_degree() + 1);
        for k in 0..=model.top_degree() {
            matrices.push(Self::degree_matrix(model, k)?);
        }
        Ok(PushPull { matrices })
    }

    fn degree_matrix(model: &NestedModel, k: usize) -> Result<Matrix> {
        let n = model.w.rank(k);
        let elements = model.typed_spanning_set(k);
        let mut values = Vec::with_capacity(elements.len());
        let mut rules = Vec::with_capacity(elements.len());
        for t in &elements {
            let v = model.typed_value(t);
            let vc = model.w_coords(&v, k).ok_or_else(|| Error::NotInModel {
                degree: k,
                component: v.to_string(),
            })?;
            let r = model.typed_rule(t);
            let rc = model.w_coords(&r, k).ok_or_else(|| Error::InconsistentOperator {
                degree: k,
                detail: format!("rule value of {t} is `{r}`, outside the model"),
            })?;
            values.push(vc);
            rules.push(rc);
        }
        let mut span = Echelon::new(n);
        let mut chosen = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if span.insert(&sparse_from_dense(v)) {
                chosen.push(i);
            }
        }
        if chosen.len() != n {
            return Err(Error::ModelCheck(format!(
                "typed elements span rank {} of {n} in degree {k}",
                chosen.len()
            )));
        }
        let c_b = Matrix::from_columns(n, &chosen.iter().map(|&i| values[i].clone()).collect::<Vec<_>>());
        let p_b = Matrix::from_columns(n, &chosen.iter().map(|&i| rules[i].clone()).collect::<Vec<_>>());
        let inv = c_b.inverse().ok_or_else(|| Error::ModelCheck(format!("singular basis in degree {k}")))?;
        let m = p_b.mul(&inv);
        for (i, t) in elements.iter().enumerate() {
            if m.mul_vec(&values[i]) != rules[i] {
                return Err(Error::InconsistentOperator {
                    degree: k,
                    detail: format!("rule for {t} disagrees with the value forced by the other rules"),
                });
            }
        }
        Ok(m)
    }

    pub fn matrix(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }

    pub fn top_degree(&self) -> usize {
        self.matrices.len() - 1
    }

    /// Apply `Π` to a class of `W`.
    pub fn apply(&self, model: &NestedModel, c: &Polynomial) -> Result<Polynomial> {
        model.check_in_model(c)?;
        let t = model.ring();
        let mut out = Polynomial::zero(t.vars());
        for (k, part) in c.homogeneous_components() {
            let k = k as usize;
            if k > self.top_degree() {
                continue;
            }
            let coords = model.w_coords(&t.normal_form(&part), k).expect("membership checked");
            let image = self.matrices[k].mul_vec(&coords);
            let basis = model.w.basis_classes(k);
            for (b, a) in basis.iter().zip(&image) {
                if !a.is_zero() {
                    out = &out + &b.scale(a);
                }
            }
        }
        Ok(t.normal_form(&out))
    }

    /// Check `Π² = 3Π` in every degree; returns the first failing degree.
    pub fn projector_defect(&self) -> Option<usize> {
        self.matrices
            .iter()
            .position(|m| m.mul(m) != m.scale(&rat(3)))
    }

    /// Image of `Π` in degree `k`, as classes of the ambient ring.
    pub fn image_classes(&self, model: &NestedModel, k: usize) -> Vec<Polynomial> {
        let basis = model.w.basis_classes(k);
        let m = &self.matrices[k];
        (0..m.ncols())
            .map(|j| {
                let col = m.column(j);
                basis
                    .iter()
                    .zip(&col)
                    .fold(Polynomial::zero(model.ring().vars()), |acc, (b, a)| &acc + &b.scale(a))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::{nested_model, PipelineConfig};
    use crate::oracles::builtin;

    fn model(name: &str) -> NestedModel {
        nested_model(&builtin(name).unwrap(), &PipelineConfig::default()).unwrap()
    }

    #[test]
    fn curve_values() {
        let m = model("P1");
        let pp = PushPull::build(&m).unwrap();
        assert_eq!(pp.projector_defect(), None);
        let t = m.ring();
        let h = m.variety.ring.var(0);
        let x: Vec<Polynomial> = (0..3).map(|s| m.slot(s, &h)).collect();
        let s1 = &(&x[0] + &x[1]) + &x[2];
        let s2 = &(&(&x[0] * &x[1]) + &(&x[0] * &x[2])) + &(&x[1] * &x[2]);
        let (e, f) = (m.e(), m.f());
        let check = |c: Polynomial, want: Polynomial| assert_eq!(pp.apply(&m, &c).unwrap(), t.normal_form(&want));
        check(f.clone(), s1.scale(&rat(4)));
        check(&e * &f, s2.scale(&rat(6)));
        check(e.pow(2), s2.scale(&rat(2)));
        check(f.pow(2), s2.scale(&rat(10)));
        let rule = m.typed_rule(&TypedElement::E {
            a: Monomial::one(1),
            b: Monomial::one(1),
            k: 1,
        });
        assert_eq!(pp.apply(&m, &e).unwrap(), rule);
    }

    #[test]
    fn plane_projector() {
        let m = model("P2");
        let pp = PushPull::build(&m).unwrap();
        assert_eq!(pp.projector_defect(), None);
        let t = m.ring();
        let (e, f) = (m.e(), m.f());
        let expect = |lhs: Polynomial, rhs: Polynomial| {
            assert_eq!(pp.apply(&m, &lhs).unwrap(), t.normal_form(&rhs));
        };
        expect(e.clone(), &e + &f);
        expect(f.clone(), (&e + &f).scale(&rat(2)));
        expect(&e * &f, (&e * &f).scale(&rat(3)));
        expect(f.pow(2), &(&e.pow(2).scale(&rat(2)) + &f.pow(2).scale(&rat(2))) + &(&e * &f));
        expect(e.pow(2), &(&e.pow(2) + &f.pow(2)) - &(&e * &f));
    }
}
