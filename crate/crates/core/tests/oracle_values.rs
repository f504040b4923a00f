//! Frozen rank tables and counts. Values are either classical (Betti numbers of Hilbert
//! schemes, fixed-point counts) or produced by this pipeline and pinned against regressions.

use hilbchow::hilb::{hilb2_model, hilb3_model, nested_model, PipelineConfig, PushPull, XiRange};
use hilbchow::oracles::{builtin, goettsche_betti, hilb_fixed_points, nested_fixed_points, sym_ranks};
use hilbchow::suite::operator_ledger;
use hilbchow::RankTable;

/// Expected Hilb², nested and Hilb³ rank tables of a built-in.
type Expected<'a> = (&'a str, &'a [usize], &'a [usize], &'a [usize]);

fn r(v: &[usize]) -> RankTable {
    RankTable(v.to_vec())
}

#[test]
fn generating_function_tables() {
    assert_eq!(goettsche_betti(&[1, 0, 1, 0, 1], 2).unwrap(), r(&[1, 2, 3, 2, 1]));
    assert_eq!(goettsche_betti(&[1, 0, 1, 0, 1], 3).unwrap(), r(&[1, 2, 5, 6, 5, 2, 1]));
    assert_eq!(goettsche_betti(&[1, 0, 2, 0, 1], 2).unwrap(), r(&[1, 3, 6, 3, 1]));
    assert_eq!(goettsche_betti(&[1, 0, 2, 0, 1], 3).unwrap(), r(&[1, 3, 9, 14, 9, 3, 1]));
    assert_eq!(goettsche_betti(&[1, 0, 1, 0, 1], 1).unwrap(), r(&[1, 1, 1]));
}

#[test]
fn symmetric_power_tables() {
    let p1 = builtin("P1").unwrap();
    assert_eq!(sym_ranks(&p1.ring, 2).unwrap(), r(&[1, 1, 1]));
    assert_eq!(sym_ranks(&p1.ring, 3).unwrap(), r(&[1, 1, 1, 1]));
    let p2 = builtin("P2").unwrap();
    assert_eq!(sym_ranks(&p2.ring, 2).unwrap(), r(&[1, 1, 2, 1, 1]));
    assert_eq!(sym_ranks(&p2.ring, 3).unwrap(), r(&[1, 1, 2, 2, 2, 1, 1]));
}

#[test]
fn fixed_point_counts() {
    assert_eq!(hilb_fixed_points(2, 1, 3).unwrap(), 4);
    assert_eq!(hilb_fixed_points(3, 2, 2).unwrap(), 9);
    assert_eq!(hilb_fixed_points(3, 2, 3).unwrap(), 22);
    assert_eq!(hilb_fixed_points(4, 2, 3).unwrap(), 40);
    assert_eq!(hilb_fixed_points(4, 3, 2).unwrap(), 18);
    assert_eq!(hilb_fixed_points(4, 3, 3).unwrap(), 64);
    assert_eq!(nested_fixed_points(2, 1, 2).unwrap(), 6);
    assert_eq!(nested_fixed_points(3, 2, 2).unwrap(), 39);
    assert_eq!(nested_fixed_points(4, 2, 2).unwrap(), 76);
}

#[test]
fn pipeline_tables() {
    let cfg = PipelineConfig::default();
    let cases: [Expected; 4] = [
        ("P1", &[1, 1, 1], &[1, 2, 2, 1], &[1, 1, 1, 1]),
        ("P2", &[1, 2, 3, 2, 1], &[1, 4, 9, 11, 9, 4, 1], &[1, 2, 5, 6, 5, 2, 1]),
        ("P1xP1", &[1, 3, 6, 3, 1], &[1, 6, 18, 26, 18, 6, 1], &[1, 3, 9, 14, 9, 3, 1]),
        (
            "P3",
            &[1, 2, 4, 4, 4, 2, 1],
            &[1, 4, 11, 19, 25, 25, 19, 11, 4, 1],
            &[1, 2, 6, 10, 13, 13, 10, 6, 2, 1],
        ),
    ];
    for (name, h2, w, h3) in cases {
        let x = builtin(name).unwrap();
        assert_eq!(hilb2_model(&x, &cfg).unwrap().ranks(), r(h2), "{name}");
        assert_eq!(nested_model(&x, &cfg).unwrap().w.ranks(), r(w), "{name}");
        assert_eq!(hilb3_model(&x, &cfg, XiRange::default()).unwrap().ranks(), r(h3), "{name}");
    }
}

#[test]
fn threefold_totals_match_fixed_points() {
    let x = builtin("P3").unwrap();
    let cfg = PipelineConfig::default();
    assert_eq!(hilb2_model(&x, &cfg).unwrap().ranks().total() as u64, hilb_fixed_points(4, 3, 2).unwrap());
    assert_eq!(hilb3_model(&x, &cfg, XiRange::default()).unwrap().ranks().total() as u64, hilb_fixed_points(4, 3, 3).unwrap());
}

#[test]
fn quadric_surface_agrees_with_generating_function() {
    let x = builtin("P1xP1").unwrap();
    let cfg = PipelineConfig::default();
    let m = nested_model(&x, &cfg).unwrap();
    assert_eq!(m.w.ranks().total() as u64, nested_fixed_points(4, 2, 2).unwrap());
    let pp = PushPull::build(&m).unwrap();
    assert!(operator_ledger(&m, &pp).iter().all(|c| c.pass));
    assert_eq!(pp.projector_defect(), None);
    let h = hilb3_model(&x, &cfg, XiRange::default()).unwrap();
    assert_eq!(h.ranks(), goettsche_betti(&[1, 0, 2, 0, 1], 3).unwrap());
}

#[test]
fn xi_ranges_agree() {
    let x = builtin("P2").unwrap();
    let cfg = PipelineConfig::default();
    let a = hilb3_model(&x, &cfg, XiRange::Generators).unwrap();
    let b = hilb3_model(&x, &cfg, XiRange::BasisMonomials).unwrap();
    assert!(a.subspace.same_as(&b.subspace));
}

#[test]
fn alternating_minus_convention_also_closes() {
    use hilbchow::construct::ChernSigns;
    use hilbchow::hilb::Sign;
    let cfg = PipelineConfig {
        eqcz_sign: Sign::Minus,
        chern_signs: ChernSigns::Alternating,
        ..Default::default()
    };
    let x = builtin("P2").unwrap();
    assert_eq!(hilb3_model(&x, &cfg, XiRange::default()).unwrap().ranks(), r(&[1, 2, 5, 6, 5, 2, 1]));
}
