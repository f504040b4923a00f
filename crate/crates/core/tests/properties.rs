use std::sync::{Arc, OnceLock};

use hilbchow::hilb::{hilb3_from_nested, nested_model, Hilb3Model, PipelineConfig, XiRange};
use hilbchow::io::{parse_expression, parse_ring_file, RingFile};
use hilbchow::oracles::builtin;
use hilbchow::suite::{construction_identities, RandomCase};
use hilbchow::{Monomial, Polynomial, QuotientRing, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `A*(P1 × P2)` with generators `a` (relation a²) and `b` (relation b³).
fn small_ring() -> Arc<QuotientRing> {
    static RING: OnceLock<Arc<QuotientRing>> = OnceLock::new();
    RING.get_or_init(|| {
        let text = "variety P1xP2 dim 3\ngenerators: a:1, b:1\nrelations: a^2, b^3\nchern_tangent: 1\ndiagonal: 1 (x) 1\npoint: a*b^2\n";
        parse_ring_file(text).unwrap().presentation().and_then(QuotientRing::new).unwrap()
    })
    .clone()
}

fn plane_cube() -> &'static Hilb3Model {
    static MODEL: OnceLock<Hilb3Model> = OnceLock::new();
    MODEL.get_or_init(|| {
        let m = nested_model(&builtin("P2").unwrap(), &PipelineConfig::default()).unwrap();
        hilb3_from_nested(m, XiRange::default()).unwrap()
    })
}

/// Polynomials with up to six terms, exponents below 4, small rational coefficients.
fn poly(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..4, n), -5i64..=5, 1i64..=3), 0..6)
}

fn build(ring: &QuotientRing, terms: &[(Vec<u32>, i64, i64)]) -> Polynomial {
    Polynomial::from_terms(
        ring.vars(),
        terms
            .iter()
            .map(|(e, num, den)| (Monomial(e.clone()), Rational::new((*num).into(), (*den).into()))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_a_commutative_ring(a in poly(2), b in poly(2), c in poly(2)) {
        let r = small_ring();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &(&b + &c)), r.normal_form(&(&r.mul(&a, &b) + &r.mul(&a, &c))));
        prop_assert_eq!(r.mul(&a, &r.one()), r.normal_form(&a));
    }

    #[test]
    fn normal_form_is_idempotent_and_respects_products(a in poly(2), b in poly(2)) {
        let r = small_ring();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let na = r.normal_form(&a);
        prop_assert_eq!(r.normal_form(&na), na.clone());
        prop_assert_eq!(r.normal_form(&(&a * &b)), r.normal_form(&(&na * &r.normal_form(&b))));
        prop_assert!(na.degrees().iter().all(|&k| k as usize <= r.top_degree()));
    }

    #[test]
    fn homogeneous_components_reassemble(a in poly(2)) {
        let r = small_ring();
        let a = build(&r, &a);
        let sum = a
            .homogeneous_components()
            .iter()
            .fold(Polynomial::zero(r.vars()), |acc, (_, c)| &acc + c);
        prop_assert_eq!(sum, a.clone());
        for (k, c) in a.homogeneous_components() {
            prop_assert_eq!(c.homogeneous_degree(), Some(k));
        }
    }

    #[test]
    fn coordinates_round_trip(a in poly(2)) {
        let r = small_ring();
        let a = build(&r, &a);
        for (k, c) in a.homogeneous_components() {
            let k = k as usize;
            if k <= r.top_degree() {
                prop_assert_eq!(r.from_coords(k, &r.coords(&c, k)), r.normal_form(&c));
            }
        }
    }

    #[test]
    fn expressions_round_trip_through_text(a in poly(2)) {
        let r = small_ring();
        let a = build(&r, &a);
        let text = a.to_string();
        prop_assert_eq!(parse_expression(&text, r.vars()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nested_model_is_closed_under_products(seed in any::<u64>(), i in 0usize..=3, j in 0usize..=3) {
        let h = plane_cube();
        let m = &h.nested;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (m.random_class(i, &mut rng), m.random_class(j, &mut rng));
        prop_assert!(m.w.contains(&m.ring().mul(&a, &b)));
    }

    #[test]
    fn push_pull_is_linear_and_lands_in_the_image(seed in any::<u64>(), k in 0usize..=6, l in -4i64..=4) {
        let h = plane_cube();
        let m = &h.nested;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (m.random_class(k, &mut rng), m.random_class(k, &mut rng));
        let lam = Rational::from_integer(l.into());
        let lhs = h.apply(&(&a + &b.scale(&lam))).unwrap();
        let rhs = &h.apply(&a).unwrap() + &h.apply(&b).unwrap().scale(&lam);
        prop_assert_eq!(lhs, m.ring().normal_form(&rhs));
        let pa = h.apply(&a).unwrap();
        prop_assert!(h.subspace.contains(&pa));
        prop_assert_eq!(h.apply(&pa).unwrap(), pa.scale(&Rational::from_integer(3.into())));
    }

    #[test]
    fn hilbert_cube_ring_is_a_subalgebra(seed in any::<u64>(), i in 0usize..=3, j in 0usize..=3) {
        let h = plane_cube();
        let t = h.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (h.nested.random_class(i, &mut rng), h.nested.random_class(j, &mut rng));
        let (pa, pb) = (h.apply(&a).unwrap(), h.apply(&b).unwrap());
        prop_assert!(h.subspace.contains(&t.mul(&pa, &pb)));
    }

    #[test]
    fn random_constructions_satisfy_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let case = RandomCase::sample(&mut rng);
        let checks = construction_identities(&case, &mut rng).unwrap();
        for c in checks {
            prop_assert!(c.pass, "{:?}: {} {}", case, c.name, c.detail);
        }
    }
}

#[test]
fn serialization_is_idempotent_on_builtins() {
    for name in hilbchow::oracles::BUILTIN_NAMES {
        let once = RingFile::from_variety(&builtin(name).unwrap()).to_string();
        let twice = RingFile::from_variety(&parse_ring_file(&once).unwrap().to_variety().unwrap()).to_string();
        assert_eq!(once, twice);
    }
}
