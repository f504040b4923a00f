//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails. All comparisons are exact.

use std::time::{Duration, Instant};

use hilbchow::construct::VarietyData;
use hilbchow::hilb::{hilb2_model, hilb3_from_nested, nested_model, PipelineConfig, PushPull, XiRange};
use hilbchow::io::parse_ring_file;
use hilbchow::oracles::{builtin, goettsche_betti, hilb_fixed_points, nested_fixed_points, sym_ranks, BUILTIN_NAMES};
use hilbchow::suite::{curve_coherence, diagonal_corruptions, operator_ledger, random_construction_suite, Check};
use hilbchow::RankTable;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x(name: &str) -> Result<VarietyData, String> {
    builtin(name).map_err(|e| e.to_string())
}

fn ranks(v: &[usize]) -> RankTable {
    RankTable(v.to_vec())
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn all_pass(checks: &[Check]) -> Result<(), String> {
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(format!("{} [{}]", c.name, c.detail)),
    }
}

fn hilb3_ranks(name: &str) -> Result<RankTable, String> {
    let m = nested_model(&x(name)?, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let h = hilb3_from_nested(m, XiRange::default()).map_err(|e| e.to_string())?;
    Ok(h.ranks())
}

fn line_ranks() -> Outcome {
    let start = Instant::now();
    let got = hilb3_ranks("P1")?;
    within(start.elapsed(), Duration::from_secs(1))?;
    let sym = sym_ranks(&x("P1")?.ring, 3).map_err(|e| e.to_string())?;
    ensure(got == ranks(&[1, 1, 1, 1]), || format!("got {got}"))?;
    ensure(got == sym, || format!("got {got}, Sym³ gives {sym}"))?;
    Ok(format!("P1 Hilb³ ranks {got} = Sym³ in {:.2?}", start.elapsed()))
}

fn plane_ranks() -> Outcome {
    let start = Instant::now();
    let got = hilb3_ranks("P2")?;
    within(start.elapsed(), Duration::from_secs(60))?;
    let gf = goettsche_betti(&[1, 0, 1, 0, 1], 3).map_err(|e| e.to_string())?;
    let fixed = hilb_fixed_points(3, 2, 3).map_err(|e| e.to_string())?;
    ensure(got == ranks(&[1, 2, 5, 6, 5, 2, 1]), || format!("got {got}"))?;
    ensure(got == gf, || format!("got {got}, generating function gives {gf}"))?;
    ensure(got.total() == 22 && fixed == 22, || format!("total {}, fixed points {fixed}", got.total()))?;
    Ok(format!("P2 Hilb³ ranks {got}, total 22 = fixed points, in {:.2?}", start.elapsed()))
}

fn hilb2_ranks() -> Outcome {
    let start = Instant::now();
    let cfg = PipelineConfig::default();
    let p1 = hilb2_model(&x("P1")?, &cfg).map_err(|e| e.to_string())?.ranks();
    let p2 = hilb2_model(&x("P2")?, &cfg).map_err(|e| e.to_string())?.ranks();
    within(start.elapsed(), Duration::from_secs(5))?;
    ensure(p1 == ranks(&[1, 1, 1]), || format!("P1 got {p1}"))?;
    ensure(p2 == ranks(&[1, 2, 3, 2, 1]), || format!("P2 got {p2}"))?;
    Ok(format!("Hilb² ranks P1 {p1}, P2 {p2}"))
}

fn nested_ranks() -> Outcome {
    let start = Instant::now();
    let cfg = PipelineConfig::default();
    let p1 = nested_model(&x("P1")?, &cfg).map_err(|e| e.to_string())?.w.ranks();
    let p2 = nested_model(&x("P2")?, &cfg).map_err(|e| e.to_string())?.w.ranks();
    within(start.elapsed(), Duration::from_secs(30))?;
    let f1 = nested_fixed_points(2, 1, 2).map_err(|e| e.to_string())?;
    let f2 = nested_fixed_points(3, 2, 2).map_err(|e| e.to_string())?;
    ensure(p1 == ranks(&[1, 2, 2, 1]), || format!("P1 got {p1}"))?;
    ensure(p2 == ranks(&[1, 4, 9, 11, 9, 4, 1]), || format!("P2 got {p2}"))?;
    ensure(p1.total() == 6 && f1 == 6, || format!("P1 total {} vs fixed points {f1}", p1.total()))?;
    ensure(p2.total() == 39 && f2 == 39, || format!("P2 total {} vs fixed points {f2}", p2.total()))?;
    Ok(format!("nested ranks P1 {p1} (6), P2 {p2} (39) match fixed points"))
}

fn operators() -> Outcome {
    for name in ["P1", "P2"] {
        let m = nested_model(&x(name)?, &PipelineConfig::default()).map_err(|e| e.to_string())?;
        let pp = PushPull::build(&m).map_err(|e| e.to_string())?;
        all_pass(&operator_ledger(&m, &pp)).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("six push-pull identities hold on P1 and P2".into())
}

fn projector() -> Outcome {
    for name in ["P1", "P2"] {
        let m = nested_model(&x(name)?, &PipelineConfig::default()).map_err(|e| e.to_string())?;
        let pp = PushPull::build(&m).map_err(|e| e.to_string())?;
        if let Some(k) = pp.projector_defect() {
            return Err(format!("{name}: Π² ≠ 3Π in degree {k}"));
        }
    }
    Ok("Π² = 3Π in every degree on P1 and P2".into())
}

fn eigen() -> Outcome {
    for name in ["P1", "P2"] {
        let m = nested_model(&x(name)?, &PipelineConfig::default()).map_err(|e| e.to_string())?;
        let h = hilb3_from_nested(m, XiRange::default()).map_err(|e| e.to_string())?;
        h.eigen_check(50, 2024).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("Π = 3 on generators and 50 random products (P1, P2)".into())
}

fn image_closure() -> Outcome {
    for name in ["P1", "P2"] {
        hilb3_ranks(name).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("image of Π equals the generated subring on P1 and P2".into())
}

fn random_constructions() -> Outcome {
    let start = Instant::now();
    let checks = random_construction_suite(10, 7);
    within(start.elapsed(), Duration::from_secs(30))?;
    all_pass(&checks)?;
    Ok(format!("{} identities over 10 random cases in {:.2?}", checks.len(), start.elapsed()))
}

fn validation() -> Outcome {
    let mut n = 0;
    for name in BUILTIN_NAMES {
        let checks = diagonal_corruptions(&x(name)?);
        n += checks.len();
        all_pass(&checks)?;
    }
    let text = "variety Bad dim 2\ngenerators: h:1\nrelations: h^3 + h\nchern_tangent: 1\ndiagonal: 1 (x) 1\npoint: h^2\n";
    match parse_ring_file(text) {
        Ok(_) => return Err("inhomogeneous relation accepted".into()),
        Err(e) => {
            ensure(e.line == 3 && e.column > 0, || format!("position {}:{}", e.line, e.column))?;
            ensure(e.message.contains("inhomogeneous"), || e.to_string())?;
        }
    }
    Ok(format!("{n} diagonal checks pass; inhomogeneous relation rejected at line 3"))
}

fn coherence() -> Outcome {
    let p1 = x("P1")?;
    let unit = curve_coherence(&p1, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    ensure(unit.agrees(), || format!("constant 1 diverges: {} vs {}", unit.sym_route, unit.rule_route))?;
    let half_cfg = PipelineConfig {
        rel3_half: true,
        ..Default::default()
    };
    let half = curve_coherence(&p1, &half_cfg).map_err(|e| e.to_string())?;
    ensure(!half.agrees(), || "constant 1/2 unexpectedly agrees".into())?;
    Ok(format!(
        "constant 1 agrees ({}); constant 1/2 diverges ({} vs {})",
        unit.sym_route, half.sym_route, half.rule_route
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("P1 Hilb³ ranks", line_ranks),
        ("P2 Hilb³ ranks", plane_ranks),
        ("Hilb² ranks", hilb2_ranks),
        ("nested ranks", nested_ranks),
        ("push-pull identities", operators),
        ("projector", projector),
        ("eigenvalue 3", eigen),
        ("image equals closure", image_closure),
        ("random constructions", random_constructions),
        ("input validation", validation),
        ("curve coherence", coherence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
