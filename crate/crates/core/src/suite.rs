//! Named consistency checks shared by the `verify` command and the test suites.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{
    blowup, projective_bundle, validate_diagonal, BlowupData, ChernLift, ChernSigns, ChernVector,
    VarietyData,
};
use crate::error::Result;
use crate::hilb::{hilb2_model, hilb3_from_nested, nested_model, PipelineConfig, PushPull, TypedElement, XiRange};
use crate::linalg::Matrix;
use crate::oracles::{goettsche_betti, sym_ranks};
use crate::poly::{rat, Generator, Monomial, Polynomial, VarList};
use crate::ring::{induced_map, QuotientRing, RankTable, RingPresentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<()>) -> Self {
        match r {
            Ok(()) => Check::new(name, true, ""),
            Err(e) => Check::new(name, false, e.to_string()),
        }
    }

    fn equal<T: PartialEq + std::fmt::Display>(name: impl Into<String>, got: &T, want: &T) -> Self {
        let detail = if got == want {
            String::new()
        } else {
            format!("got {got}, expected {want}")
        };
        Check::new(name, got == want, detail)
    }
}

/// Replace one coefficient of the diagonal at a time (term `i` scaled by 2) and report
/// whether every corruption is rejected.
pub fn diagonal_corruptions(x: &VarietyData) -> Vec<Check> {
    let mut out = vec![Check::from_result(format!("{}: diagonal accepted", x.name), validate_diagonal(x))];
    for i in 0..x.diagonal_terms.len() {
        let mut bad = x.clone();
        bad.diagonal_terms[i].0 = bad.diagonal_terms[i].0.scale(&rat(2));
        let rejected = validate_diagonal(&bad).is_err();
        let (a, b) = &x.diagonal_terms[i];
        out.push(Check::new(
            format!("{}: doubled term {a} ⊗ {b} rejected", x.name),
            rejected,
            if rejected { "" } else { "corrupted diagonal passed validation" },
        ));
    }
    out
}

/// A product of projective spaces `P^{n_1} × … × P^{n_m}` with a linear sub-product
/// `P^{a_1} × … × P^{a_m}` (all `a_i = 0` gives a point).
#[derive(Clone, Debug)]
pub struct RandomCase {
    pub dims: Vec<u32>,
    pub sub: Vec<u32>,
}

impl RandomCase {
    /// At most three factors, total dimension at most four, codimension at least one.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        loop {
            let m = rng.gen_range(1..=3);
            let dims: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
            if dims.iter().sum::<u32>() > 4 {
                continue;
            }
            let sub: Vec<u32> = if rng.gen_bool(0.3) {
                vec![0; m]
            } else {
                dims.iter().map(|&n| rng.gen_range(0..=n)).collect()
            };
            if sub.iter().sum::<u32>() < dims.iter().sum::<u32>() {
                return RandomCase { dims, sub };
            }
        }
    }

    pub fn codimension(&self) -> usize {
        self.dims.iter().zip(&self.sub).map(|(n, a)| (n - a) as usize).sum()
    }

    fn ring(&self, exps: &[u32], name: String) -> Result<Arc<QuotientRing>> {
        let gens = (0..exps.len()).map(|i| Generator::new(format!("h{}", i + 1), 1)).collect();
        let v = VarList::new(gens)?;
        let rels = exps
            .iter()
            .enumerate()
            .map(|(i, &n)| Polynomial::var(&v, i).pow(n + 1))
            .collect();
        QuotientRing::new(RingPresentation::new(name, v, rels, exps.iter().sum::<u32>() as usize)?)
    }

    pub fn ambient(&self) -> Result<Arc<QuotientRing>> {
        self.ring(&self.dims, format!("P{:?}", self.dims))
    }

    pub fn center(&self) -> Result<Arc<QuotientRing>> {
        self.ring(&self.sub, format!("P{:?}", self.sub))
    }
}

/// Σ_{j=0}^{r-1} rank_{k-j}(Y).
fn bundle_ranks(y: &RankTable, r: usize) -> Vec<usize> {
    let top = y.0.len() - 1 + r - 1;
    (0..=top)
        .map(|k| (0..r).filter(|&j| j <= k).map(|j| y.get(k - j)).sum())
        .collect()
}

/// rank_k(X) + Σ_{j=0}^{c-2} rank_{k-j-1}(Y).
fn blowup_ranks(x: &RankTable, y: &RankTable, c: usize) -> Vec<usize> {
    (0..x.0.len())
        .map(|k| x.get(k) + (0..c.saturating_sub(1)).filter(|&j| j < k).map(|j| y.get(k - j - 1)).sum::<usize>())
        .collect()
}

/// Bundle and blowup identities on one random case.
pub fn construction_identities<R: Rng>(case: &RandomCase, rng: &mut R) -> Result<Vec<Check>> {
    let tag = format!("X=P{:?} Y=P{:?}", case.dims, case.sub);
    let x = case.ambient()?;
    let y = case.center()?;
    let mut out = Vec::new();

    // Projective bundle of a random bundle on X.
    let r = rng.gen_range(1..=3usize);
    let mut classes = vec![x.one()];
    for j in 1..=r {
        let mut c = Polynomial::zero(x.vars());
        if j <= x.top_degree() {
            for b in x.basis_classes(j) {
                c = &c + &b.scale(&rat(rng.gen_range(-2..=2)));
            }
        }
        classes.push(c);
    }
    let pb = projective_bundle(&x, &ChernVector::new(classes)?, "z")?;
    let expected = bundle_ranks(&x.rank_table(), r);
    out.push(Check::equal(
        format!("{tag}: bundle of rank {r} rank identity"),
        &pb.ring.rank_table(),
        &RankTable(expected),
    ));
    let z = Polynomial::var(pb.ring.vars(), pb.h);
    let mut extraction = true;
    for k in 0..=x.top_degree() {
        for a in x.basis_classes(k) {
            for j in 0..r {
                let cls = pb.ring.mul(&pb.pullback.apply(&a), &z.pow(j as u32));
                let got = pb.pushforward.apply(&cls);
                let want = if j + 1 == r { x.normal_form(&a) } else { Polynomial::zero(x.vars()) };
                extraction &= x.normal_form(&got) == want;
            }
        }
    }
    out.push(Check::new(format!("{tag}: bundle pushforward extracts the top power"), extraction, ""));

    // Blowup of X along Y.
    let c = case.codimension();
    let restriction = induced_map(&x, &y, &(0..x.vars().len()).map(|i| y.var(i)).collect::<Vec<_>>())?;
    let mut total_n = y.one();
    let mut class_y = x.one();
    for (i, (n, a)) in case.dims.iter().zip(&case.sub).enumerate() {
        let h = y.var(i);
        total_n = &total_n * &(&y.one() + &h).pow(n - a);
        class_y = &class_y * &x.var(i).pow(n - a);
    }
    let chern = ChernVector::from_total(&y.normal_form(&total_n), c)?;
    let bl = blowup(BlowupData {
        base: &x,
        restriction: &restriction,
        chern: ChernLift::Solve(chern),
        class_y,
        kernel_domain: None,
        var_name: "e",
        signs: ChernSigns::Literal,
    })?;
    out.push(Check::equal(
        format!("{tag}: blowup rank identity"),
        &bl.ring.rank_table(),
        &RankTable(blowup_ranks(&x.rank_table(), &y.rank_table(), c)),
    ));
    out.push(Check::new(
        format!("{tag}: exceptional relation normal-forms to zero"),
        bl.ring.is_zero(&bl.relation),
        "",
    ));
    let pi_star = bl.pushforward()?;
    let composite = bl.pullback.then(&pi_star);
    let identity = (0..=x.top_degree()).all(|k| *composite.block(k) == Matrix::identity(x.rank(k)));
    out.push(Check::new(format!("{tag}: pushforward after pullback is the identity"), identity, ""));
    Ok(out)
}

/// Run `construction_identities` on `count` random cases from a fixed seed.
pub fn random_construction_suite(count: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let case = RandomCase::sample(&mut rng);
        match construction_identities(&case, &mut rng) {
            Ok(v) => out.extend(v),
            Err(e) => out.push(Check::new(format!("case {i} {case:?}"), false, e.to_string())),
        }
    }
    out
}

/// Values of `Π(e)` on a curve by the symmetric-class route and by the `e^k` rule.
#[derive(Clone, Debug)]
pub struct Coherence {
    pub e: Polynomial,
    pub f: Polynomial,
    pub sym_route: Polynomial,
    pub rule_route: Polynomial,
}

impl Coherence {
    pub fn agrees(&self) -> bool {
        self.sym_route == self.rule_route
    }
}

/// For a curve, `e` is a symmetric slot class, so `Π(e)` can be evaluated by the
/// slot-permutation sum or by the `e^k` rule.
pub fn curve_coherence(x: &VarietyData, config: &PipelineConfig) -> Result<Coherence> {
    let m = nested_model(x, config)?;
    let t = m.ring();
    let e = t.normal_form(&m.e());
    let sym_route = m.typed_rule(&TypedElement::Sym(e.clone()));
    let n = x.vars().len();
    let rule_route = m.typed_rule(&TypedElement::E {
        a: Monomial::one(n),
        b: Monomial::one(n),
        k: 1,
    });
    Ok(Coherence {
        f: t.normal_form(&m.f()),
        e,
        sym_route,
        rule_route,
    })
}

/// The operator identities `Π(1)=3`, `Π(e)=e+f`, `Π(f)=2e+2f`, `Π(ef)=3ef`,
/// `Π(f²)=2e²+2f²+ef`, `Π(e²)=e²+f²-ef`.
pub fn operator_ledger(m: &crate::hilb::NestedModel, pp: &PushPull) -> Vec<Check> {
    let t = m.ring();
    let (e, f) = (m.e(), m.f());
    let one = t.one();
    let ef = &e * &f;
    let cases: Vec<(&str, Polynomial, Polynomial)> = vec![
        ("Π(1) = 3", one.clone(), one.scale(&rat(3))),
        ("Π(e) = e+f", e.clone(), &e + &f),
        ("Π(f) = 2e+2f", f.clone(), (&e + &f).scale(&rat(2))),
        ("Π(ef) = 3ef", ef.clone(), ef.scale(&rat(3))),
        (
            "Π(f²) = 2e²+2f²+ef",
            f.pow(2),
            &(&e.pow(2).scale(&rat(2)) + &f.pow(2).scale(&rat(2))) + &ef,
        ),
        ("Π(e²) = e²+f²-ef", e.pow(2), &(&e.pow(2) + &f.pow(2)) - &ef),
    ];
    cases
        .into_iter()
        .map(|(name, input, want)| {
            let want = t.normal_form(&want);
            match pp.apply(m, &input) {
                Ok(got) if got == want => Check::new(name, true, ""),
                Ok(got) => Check::new(name, false, format!("got {got}, expected {want}")),
                Err(err) => Check::new(name, false, err.to_string()),
            }
        })
        .collect()
}

/// Pipeline stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Hilb2,
    Nested,
    Hilb3,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Hilb2 => "hilb2",
            Stage::Nested => "nested",
            Stage::Hilb3 => "hilb3",
        })
    }
}

impl std::str::FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hilb2" => Ok(Stage::Hilb2),
            "nested" => Ok(Stage::Nested),
            "hilb3" => Ok(Stage::Hilb3),
            other => Err(format!("unknown stage `{other}` (expected hilb2, nested or hilb3)")),
        }
    }
}

/// Surface Betti vector `(1, 0, b2, 0, 1)` when `X` looks like a surface with even cohomology.
fn surface_betti(x: &VarietyData) -> Option<[u64; 5]> {
    (x.dimension == 2).then(|| [1, 0, x.ring.rank(1) as u64, 0, 1])
}

/// Every check that applies to `x` at the given stage.
pub fn verify(x: &VarietyData, config: &PipelineConfig, stage: Stage) -> Vec<Check> {
    let mut out = diagonal_corruptions(x);
    if x.dimension == 0 {
        return out;
    }
    match hilb2_model(x, config) {
        Ok(h2) => {
            let r = h2.ranks();
            out.push(Check::new("hilb2: palindromic ranks", r.is_palindromic(), r.to_string()));
            if let Some(b) = surface_betti(x) {
                if let Ok(want) = goettsche_betti(&b, 2) {
                    out.push(Check::equal("hilb2: ranks match the generating function", &r, &want));
                }
            }
            if x.dimension == 1 {
                if let Ok(want) = sym_ranks(&x.ring, 2) {
                    out.push(Check::equal("hilb2: ranks match Sym²", &r, &want));
                }
            }
        }
        Err(e) => out.push(Check::new("hilb2: model", false, e.to_string())),
    }
    if stage == Stage::Hilb2 {
        return out;
    }
    let nested = match nested_model(x, config) {
        Ok(m) => m,
        Err(e) => {
            out.push(Check::new("nested: model", false, e.to_string()));
            return out;
        }
    };
    let w = nested.w.ranks();
    out.push(Check::new("nested: palindromic ranks", w.is_palindromic(), w.to_string()));
    out.push(Check::new("nested: e, f lie in the model", nested.check_in_model(&(&nested.e() + &nested.f())).is_ok(), ""));
    let relations_vanish = nested.named_relations().iter().all(|(_, r)| nested.ring().is_zero(r));
    out.push(Check::new("nested: defining relations normal-form to zero", relations_vanish, ""));
    if x.dimension == 1 {
        match curve_coherence(x, config) {
            Ok(c) => out.push(Check::new(
                "nested: curve coherence of Π(e)",
                c.agrees(),
                format!("symmetric route {}, rule route {}", c.sym_route, c.rule_route),
            )),
            Err(e) => out.push(Check::new("nested: curve coherence of Π(e)", false, e.to_string())),
        }
    }
    if stage == Stage::Nested {
        return out;
    }
    let pp = match PushPull::build(&nested) {
        Ok(pp) => pp,
        Err(e) => {
            out.push(Check::new("hilb3: push-pull operator", false, e.to_string()));
            return out;
        }
    };
    out.extend(operator_ledger(&nested, &pp));
    out.push(Check::new(
        "hilb3: Π² = 3Π",
        pp.projector_defect().is_none(),
        pp.projector_defect().map(|k| format!("fails in degree {k}")).unwrap_or_default(),
    ));
    match hilb3_from_nested(nested, XiRange::default()) {
        Ok(h3) => {
            out.push(Check::new("hilb3: image equals generated subring", true, ""));
            let r = h3.ranks();
            if let Some(b) = surface_betti(x) {
                if let Ok(want) = goettsche_betti(&b, 3) {
                    out.push(Check::equal("hilb3: ranks match the generating function", &r, &want));
                }
            }
            if x.dimension == 1 {
                if let Ok(want) = sym_ranks(&x.ring, 3) {
                    out.push(Check::equal("hilb3: ranks match Sym³", &r, &want));
                }
            }
            out.push(Check::from_result("hilb3: Π acts as 3 on generators and products", h3.eigen_check(50, 0x5eed)));
        }
        Err(e) => out.push(Check::new("hilb3: image equals generated subring", false, e.to_string())),
    }
    out
}
