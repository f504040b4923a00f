use std::sync::Arc;

use crate::construct::{blowup, BlowupData, ChernLift, ExceptionalBlowup, VarietyData};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::{induced_map, GradedSubspace, GroupAction, QuotientRing, RankTable};

use super::PipelineConfig;

/// `Z₂ = Bl_Δ(X×X)` together with its swap invariants, which model `A*(Hilb² X)`.
#[derive(Clone, Debug)]
pub struct Hilb2Model {
    /// The blowup; generators are the two slot copies of `X`'s generators, then `e`.
    pub blowup: ExceptionalBlowup,
    pub swap: GroupAction,
    pub invariants: GradedSubspace,
}

impl Hilb2Model {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.blowup.ring
    }

    pub fn ranks(&self) -> RankTable {
        self.invariants.ranks()
    }
}

pub fn hilb2_model(x: &VarietyData, config: &PipelineConfig) -> Result<Hilb2Model> {
    if x.dimension == 0 {
        return Err(Error::DimensionTooSmall);
    }
    let sq = &x.square;
    let collapse: Vec<Polynomial> = (0..2)
        .flat_map(|_| (0..x.vars().len()).map(|g| x.ring.var(g)))
        .collect();
    let restriction = induced_map(&sq.ring, &x.ring, &collapse)?;
    let lifts = x
        .chern_tangent
        .classes()
        .iter()
        .map(|c| sq.place(0, c))
        .collect();
    let bl = blowup(BlowupData {
        base: &sq.ring,
        restriction: &restriction,
        chern: ChernLift::Given(lifts),
        class_y: x.diagonal(),
        kernel_domain: None,
        var_name: "e",
        signs: config.chern_signs,
    })?;
    let mut perm = sq.factor_permutation(&[1, 0]);
    perm.push(bl.e);
    let swap = GroupAction::from_permutations(&bl.ring, &[perm], 2)?;
    let invariants = swap.invariant_subspace();
    Ok(Hilb2Model {
        blowup: bl,
        swap,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::builtin;

    #[test]
    fn hilbert_square_ranks() {
        let cfg = PipelineConfig::default();
        let p1 = hilb2_model(&builtin("P1").unwrap(), &cfg).unwrap();
        assert_eq!(p1.ranks().0, vec![1, 1, 1]);
        let p2 = hilb2_model(&builtin("P2").unwrap(), &cfg).unwrap();
        assert_eq!(p2.ranks().0, vec![1, 2, 3, 2, 1]);
        assert_eq!(p2.ring().rank_table().0, vec![1, 3, 4, 3, 1]);
    }

    #[test]
    fn point_is_rejected() {
        let err = hilb2_model(&builtin("pt").unwrap(), &PipelineConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionTooSmall));
    }
}
