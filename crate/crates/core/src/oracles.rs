//! Ground truth that does not go through the Hilbert-scheme pipeline:
//! built-in varieties, Göttsche's generating function for surfaces,
//! symmetric-power ranks, and torus fixed-point counts.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::construct::{symmetric_quotient, VarietyData};
use crate::error::{Error, Result};
use crate::poly::{rat, Generator, Polynomial, VarList};
use crate::ring::{QuotientRing, RankTable, RingPresentation};

pub const BUILTIN_NAMES: [&str; 5] = ["pt", "P1", "P2", "P3", "P1xP1"];

pub fn builtin(name: &str) -> Result<VarietyData> {
    match name {
        "pt" => {
            let v = VarList::new(vec![])?;
            let ring = QuotientRing::new(RingPresentation::new("pt", v.clone(), vec![], 0)?)?;
            let one = Polynomial::one(&v);
            VarietyData::new("pt", ring, &one, vec![(one.clone(), one.clone())], one.clone())
        }
        "P1" => projective_space(1),
        "P2" => projective_space(2),
        "P3" => projective_space(3),
        "P1xP1" => {
            let v = VarList::new(vec![Generator::new("a", 1), Generator::new("b", 1)])?;
            let a = Polynomial::var(&v, 0);
            let b = Polynomial::var(&v, 1);
            let one = Polynomial::one(&v);
            let ring = QuotientRing::new(RingPresentation::new(
                "P1xP1",
                v,
                vec![a.pow(2), b.pow(2)],
                2,
            )?)?;
            let chern = &(&one + &a.scale(&rat(2))) * &(&one + &b.scale(&rat(2)));
            let ab = &a * &b;
            let diagonal = vec![
                (ab.clone(), one.clone()),
                (a.clone(), b.clone()),
                (b.clone(), a.clone()),
                (one.clone(), ab.clone()),
            ];
            VarietyData::new("P1xP1", ring, &chern, diagonal, ab)
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

fn projective_space(n: u32) -> Result<VarietyData> {
    let v = VarList::new(vec![Generator::new("h", 1)])?;
    let h = Polynomial::var(&v, 0);
    let one = Polynomial::one(&v);
    let ring = QuotientRing::new(RingPresentation::new(format!("P{n}"), v, vec![h.pow(n + 1)], n as usize)?)?;
    let chern = (&one + &h).pow(n + 1);
    let diagonal = (0..=n).map(|i| (h.pow(n - i), h.pow(i))).collect();
    VarietyData::new(format!("P{n}"), ring, &chern, diagonal, h.pow(n))
}

/// Ranks of `A*(Sym^n X)` as permutation invariants of `A*(X)^{⊗n}`.
pub fn sym_ranks(ring: &Arc<QuotientRing>, n: usize) -> Result<RankTable> {
    Ok(symmetric_quotient(ring, n)?.1.ranks())
}

type Series = Vec<BTreeMap<usize, BigInt>>;

fn series_mul(a: &Series, b: &Series, order: usize) -> Series {
    let mut out: Series = vec![BTreeMap::new(); order + 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            for (za, ca) in ai {
                for (zb, cb) in bj {
                    *out[i + j].entry(za + zb).or_insert_with(BigInt::zero) += ca * cb;
                }
            }
        }
    }
    out
}

/// Ranks of `A*(Hilb^n S)` for a surface with even Betti numbers `b_0..b_4`,
/// from the coefficient of `q^n` in `∏_m ∏_i (1 - z^{2m-2+i} q^m)^{-(-1)^i b_i}`.
pub fn goettsche_betti(betti: &[u64], n: usize) -> Result<RankTable> {
    if betti.len() != 5 {
        return Err(Error::Unsupported(format!(
            "surface Betti vector must have 5 entries, got {}",
            betti.len()
        )));
    }
    if betti[1] != 0 || betti[3] != 0 {
        return Err(Error::Unsupported("odd Betti numbers must vanish".into()));
    }
    if betti[0] != 1 {
        return Err(Error::Unsupported("b_0 must be 1".into()));
    }
    let mut series: Series = vec![BTreeMap::new(); n + 1];
    series[0].insert(0, BigInt::one());
    for m in 1..=n {
        for (i, &b) in betti.iter().enumerate() {
            if b == 0 {
                continue;
            }
            // (1 - x)^{-b} = Σ_k C(b+k-1, k) x^k with x = z^{2m-2+i} q^m
            let zexp = 2 * m - 2 + i;
            let mut factor: Series = vec![BTreeMap::new(); n + 1];
            let mut k = 0;
            let mut binom = BigInt::one();
            while k * m <= n {
                factor[k * m].insert(k * zexp, binom.clone());
                k += 1;
                binom = binom * BigInt::from(b + k as u64 - 1) / BigInt::from(k as u64);
            }
            series = series_mul(&series, &factor, n);
        }
    }
    let top = 2 * n;
    let mut ranks = vec![0usize; top + 1];
    for (z, c) in &series[n] {
        if z % 2 == 1 {
            if !c.is_zero() {
                return Err(Error::ModelCheck(format!("odd cohomological degree {z} in oracle")));
            }
            continue;
        }
        if c.is_negative() || z / 2 > top {
            return Err(Error::ModelCheck(format!("unexpected oracle coefficient {c} at z^{z}")));
        }
        ranks[z / 2] = c.to_usize().expect("small coefficient");
    }
    Ok(RankTable(ranks))
}

/// Monomial ideals of colength `n` in `dim` variables, each given by its number of
/// removable boxes (maximal elements of the complementary staircase).
fn local_configurations(dim: usize, n: usize) -> Vec<usize> {
    let mut layer: BTreeSet<Vec<Vec<u32>>> = BTreeSet::from([vec![]]);
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for boxes in &layer {
            let cells: BTreeSet<&Vec<u32>> = boxes.iter().collect();
            let origin = vec![0u32; dim];
            let candidates = std::iter::once(origin).chain(boxes.iter().flat_map(|b| {
                (0..dim).map(move |i| {
                    let mut c = b.clone();
                    c[i] += 1;
                    c
                })
            }));
            for c in candidates {
                let addable = !cells.contains(&c)
                    && (0..dim).all(|i| {
                        c[i] == 0 || {
                            let mut below = c.clone();
                            below[i] -= 1;
                            cells.contains(&below)
                        }
                    });
                if addable {
                    let mut grown = boxes.clone();
                    grown.push(c);
                    grown.sort();
                    next.insert(grown);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|boxes| {
            let cells: BTreeSet<&Vec<u32>> = boxes.iter().collect();
            boxes
                .iter()
                .filter(|b| {
                    (0..dim).all(|i| {
                        let mut above = (*b).clone();
                        above[i] += 1;
                        !cells.contains(&above)
                    })
                })
                .count()
        })
        .collect()
}

/// Sum over distributions of `n` points among `fixed` torus-fixed points, of the product of
/// `weight(configuration)` over the local configurations.
fn fixed_point_sum(fixed: usize, dim: usize, n: usize, weight: &dyn Fn(&[usize]) -> u64) -> Result<u64> {
    if dim == 0 {
        return Err(Error::Unsupported("fixed-point counts need positive dimension".into()));
    }
    fn go(
        slots: usize,
        dim: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        weight: &dyn Fn(&[usize]) -> u64,
    ) -> u64 {
        if slots == 0 {
            return if n == 0 { weight(chosen) } else { 0 };
        }
        let mut total = 0;
        for k in 0..=n {
            for corners in local_configurations(dim, k) {
                chosen.push(corners);
                total += go(slots - 1, dim, n - k, chosen, weight);
                chosen.pop();
            }
        }
        total
    }
    Ok(go(fixed, dim, n, &mut Vec::new(), weight))
}

/// Number of torus-fixed points of `Hilb^n X` for a toric `X` with `fixed` fixed points.
pub fn hilb_fixed_points(fixed: usize, dim: usize, n: usize) -> Result<u64> {
    fixed_point_sum(fixed, dim, n, &|_| 1)
}

/// Number of torus-fixed points of the nested scheme `Hilb^{[n, n+1]} X`.
pub fn nested_fixed_points(fixed: usize, dim: usize, n: usize) -> Result<u64> {
    fixed_point_sum(fixed, dim, n + 1, &|corners| corners.iter().map(|&c| c as u64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::validate_diagonal;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let x = builtin(name).unwrap();
            validate_diagonal(&x).unwrap();
        }
        assert!(matches!(builtin("P7"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn builtin_tangent_classes() {
        assert_eq!(builtin("P1").unwrap().chern_total().to_string(), "2*h + 1");
        assert_eq!(builtin("P3").unwrap().chern_total().to_string(), "4*h^3 + 6*h^2 + 4*h + 1");
        assert_eq!(builtin("P1xP1").unwrap().ring.rank_table().0, vec![1, 2, 1]);
    }

    #[test]
    fn goettsche_for_the_plane() {
        let b = [1, 0, 1, 0, 1];
        assert_eq!(goettsche_betti(&b, 1).unwrap().0, vec![1, 1, 1]);
        assert_eq!(goettsche_betti(&b, 2).unwrap().0, vec![1, 2, 3, 2, 1]);
        assert_eq!(goettsche_betti(&b, 3).unwrap().0, vec![1, 2, 5, 6, 5, 2, 1]);
        assert!(goettsche_betti(&[1, 1, 1, 1, 1], 2).is_err());
    }

    #[test]
    fn fixed_point_counts() {
        assert_eq!(hilb_fixed_points(3, 2, 2).unwrap(), 9);
        assert_eq!(hilb_fixed_points(3, 2, 3).unwrap(), 22);
        assert_eq!(nested_fixed_points(3, 2, 2).unwrap(), 39);
        assert_eq!(nested_fixed_points(2, 1, 2).unwrap(), 6);
        assert_eq!(hilb_fixed_points(4, 2, 2).unwrap(), 14);
    }

    #[test]
    fn symmetric_power_ranks() {
        let p1 = builtin("P1").unwrap().ring;
        assert_eq!(sym_ranks(&p1, 3).unwrap().0, vec![1, 1, 1, 1]);
        assert_eq!(sym_ranks(&p1, 2).unwrap().0, vec![1, 1, 1]);
        let pt = builtin("pt").unwrap().ring;
        assert_eq!(sym_ranks(&pt, 3).unwrap().0, vec![1]);
    }
}
