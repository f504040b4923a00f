use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix};
use crate::poly::{Polynomial, Rational};

use super::{GradedSubspace, QuotientRing};

/// A linear map between graded models, shifting degree by `shift`.
/// `blocks[k]` maps source degree `k` to target degree `k + shift`, in normal-form coordinates.
#[derive(Clone, Debug)]
pub struct GradedLinearMap {
    pub source: Arc<QuotientRing>,
    pub target: Arc<QuotientRing>,
    pub shift: i64,
    blocks: Vec<Matrix>,
}

impl GradedLinearMap {
    pub fn from_blocks(
        source: Arc<QuotientRing>,
        target: Arc<QuotientRing>,
        shift: i64,
        blocks: Vec<Matrix>,
    ) -> Self {
        assert_eq!(blocks.len(), source.top_degree() + 1);
        for (k, b) in blocks.iter().enumerate() {
            assert_eq!(b.ncols(), source.rank(k));
            assert_eq!(b.nrows(), target_rank(&target, k as i64 + shift));
        }
        GradedLinearMap {
            source,
            target,
            shift,
            blocks,
        }
    }

    /// Build the map from a function on normal-form basis classes of the source.
    pub fn from_fn(
        source: Arc<QuotientRing>,
        target: Arc<QuotientRing>,
        shift: i64,
        mut f: impl FnMut(usize, &Polynomial) -> Result<Polynomial>,
    ) -> Result<Self> {
        let mut blocks = Vec::with_capacity(source.top_degree() + 1);
        for k in 0..=source.top_degree() {
            let tk = k as i64 + shift;
            let rows = target_rank(&target, tk);
            let mut cols = Vec::with_capacity(source.rank(k));
            for b in source.basis_classes(k) {
                let img = f(k, &b)?;
                cols.push(if rows == 0 {
                    Vec::new()
                } else {
                    target.coords(&img.component(tk as u32), tk as usize)
                });
            }
            blocks.push(Matrix::from_columns(rows, &cols));
        }
        Ok(GradedLinearMap {
            source,
            target,
            shift,
            blocks,
        })
    }

    pub fn block(&self, k: usize) -> &Matrix {
        &self.blocks[k]
    }

    pub fn apply_coords(&self, k: usize, v: &[Rational]) -> Vec<Rational> {
        self.blocks[k].mul_vec(v)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.target.vars());
        for (k, part) in p.homogeneous_components() {
            let k = k as usize;
            if k > self.source.top_degree() {
                continue;
            }
            let tk = k as i64 + self.shift;
            if target_rank(&self.target, tk) == 0 {
                continue;
            }
            let c = self.source.coords(&part, k);
            let img = self.blocks[k].mul_vec(&c);
            out = &out + &self.target.from_coords(tk as usize, &img);
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GradedLinearMap) -> GradedLinearMap {
        let shift = self.shift + other.shift;
        let blocks = (0..=self.source.top_degree())
            .map(|k| {
                let mid = k as i64 + self.shift;
                let rows = target_rank(&other.target, k as i64 + shift);
                if mid < 0 || mid as usize > other.source.top_degree() {
                    Matrix::zeros(rows, self.source.rank(k))
                } else {
                    other.blocks[mid as usize].mul(&self.blocks[k])
                }
            })
            .collect();
        GradedLinearMap {
            source: self.source.clone(),
            target: other.target.clone(),
            shift,
            blocks,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }
}

fn target_rank(target: &QuotientRing, k: i64) -> usize {
    if k < 0 {
        0
    } else {
        target.rank(k as usize)
    }
}

/// The ring map sending generator `i` of `source` to `images[i]` in `target`.
/// Fails unless every relation of `source` maps to zero.
pub fn induced_map(
    source: &Arc<QuotientRing>,
    target: &Arc<QuotientRing>,
    images: &[Polynomial],
) -> Result<GradedLinearMap> {
    if images.len() != source.vars().len() {
        return Err(Error::InvalidAction(format!(
            "{} images for {} generators",
            images.len(),
            source.vars().len()
        )));
    }
    for (i, img) in images.iter().enumerate() {
        if img.vars() != target.vars() {
            return Err(Error::MismatchedVariables);
        }
        let d = source.vars().degree(i);
        if !img.is_zero() && img.homogeneous_degree() != Some(d) {
            return Err(Error::WrongDegree {
                what: format!("image of {}", source.vars().get(i).display_name()),
                expected: d,
                found: img.degrees().into_iter().max().unwrap_or(0),
            });
        }
    }
    for rel in &source.presentation().relations {
        let img = target.evaluate(rel, images);
        if !img.is_zero() {
            return Err(Error::NotHomomorphism {
                relation: rel.to_string(),
                image: img.to_string(),
            });
        }
    }
    GradedLinearMap::from_fn(source.clone(), target.clone(), 0, |_, b| {
        Ok(target.evaluate(b, images))
    })
}

/// Image (in the target) and kernel (in the source) of a graded map.
pub fn image_kernel(map: &GradedLinearMap) -> (GradedSubspace, GradedSubspace) {
    let mut image: Vec<Echelon> = (0..=map.target.top_degree())
        .map(|j| Echelon::new(map.target.rank(j)))
        .collect();
    let mut kernel = Vec::with_capacity(map.source.top_degree() + 1);
    for k in 0..=map.source.top_degree() {
        let b = &map.blocks[k];
        let tk = k as i64 + map.shift;
        if tk >= 0 && (tk as usize) <= map.target.top_degree() {
            image[tk as usize] = b.column_space();
        }
        let mut ker = Echelon::new(map.source.rank(k));
        if b.nrows() == 0 {
            for i in 0..map.source.rank(k) {
                let mut e = vec![Rational::from_integer(0.into()); map.source.rank(k)];
                e[i] = Rational::from_integer(1.into());
                ker.insert_dense(&e);
            }
        } else {
            for v in b.nullspace() {
                ker.insert_dense(&v);
            }
        }
        kernel.push(ker);
    }
    (
        GradedSubspace::from_parts(map.target.clone(), image),
        GradedSubspace::from_parts(map.source.clone(), kernel),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Generator, VarList};
    use crate::ring::RingPresentation;

    fn proj(top: u32) -> Arc<QuotientRing> {
        let v = VarList::new(vec![Generator::new("h", 1)]).unwrap();
        let h = Polynomial::var(&v, 0);
        QuotientRing::new(RingPresentation::new("P", v, vec![h.pow(top + 1)], top as usize).unwrap())
            .unwrap()
    }

    #[test]
    fn restriction_to_a_line() {
        let p2 = proj(2);
        let p1 = proj(1);
        let m = induced_map(&p2, &p1, &[p1.var(0)]).unwrap();
        let (im, ker) = image_kernel(&m);
        assert_eq!(im.ranks().0, vec![1, 1]);
        assert_eq!(ker.ranks().0, vec![0, 0, 1]);
    }

    #[test]
    fn non_homomorphism_detected() {
        let p2 = proj(2);
        let p1 = proj(1);
        // p1 -> p2 sending h to h is not a ring map: h^2 = 0 is not respected.
        assert!(matches!(
            induced_map(&p1, &p2, &[p2.var(0)]),
            Err(Error::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn composition() {
        let p2 = proj(2);
        let p1 = proj(1);
        let m = induced_map(&p2, &p1, &[p1.var(0)]).unwrap();
        let id = induced_map(&p1, &p1, &[p1.var(0)]).unwrap();
        let c = m.then(&id);
        let h = p2.var(0);
        assert_eq!(c.apply(&h), p1.var(0));
    }
}
