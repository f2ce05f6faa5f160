//! End-to-end acceptance suite. Prints one `PASS`/`FAIL` line per criterion
//! and fails if any criterion fails.

mod common;

use std::collections::BTreeMap;

use pfc_core::cohomology::{cohomology_group, q8_periodic_h4, torus_h3, Coefficients, DEFAULT_K};
use pfc_core::doubles::{commutativity_by_tensor_class, Convention};
use pfc_core::groups::{automorphisms, Order8};
use pfc_core::morita::omega_subgroup;
use pfc_core::report::{build_report, ReportConfig};

type Outcome = Result<String, String>;

fn criterion_1() -> Outcome {
    let expected: [(Order8, &[u64]); 5] = [
        (Order8::Z2Cubed, &[2, 2, 2, 2, 2, 2, 2]),
        (Order8::Z4xZ2, &[2, 2, 4]),
        (Order8::Z8, &[8]),
        (Order8::D8, &[2, 2, 4]),
        (Order8::Q8, &[8]),
    ];
    for (g, want) in expected {
        let h = torus_h3(&g.group()).map_err(|e| e.to_string())?;
        if h.invariant_factors != want {
            return Err(format!("H³({}) = {:?}, expected {:?}", g.name(), h.invariant_factors, want));
        }
    }
    Ok("H³(H, C*) invariant factors match for all five groups".into())
}

fn criterion_2() -> Outcome {
    let bar = cohomology_group(&Order8::Q8.group(), 4, &Coefficients::Integer, DEFAULT_K).map_err(|e| e.to_string())?;
    let periodic = q8_periodic_h4();
    if bar.invariant_factors == vec![8] && periodic == vec![8] {
        Ok("H⁴(Q8, Z) = Z/8 from both the bar and the periodic resolution".into())
    } else {
        Err(format!("bar {:?}, periodic {:?}", bar.invariant_factors, periodic))
    }
}

fn criterion_3() -> Outcome {
    let got: Vec<usize> = Order8::ALL.iter().map(|g| automorphisms(&g.group()).len()).collect();
    if got == [168, 8, 4, 8, 24] {
        Ok(format!("|Aut| = {got:?}"))
    } else {
        Err(format!("|Aut| = {got:?}, expected [168, 8, 4, 8, 24]"))
    }
}

fn criterion_4() -> Outcome {
    let census = &common::computation().census;
    let counts: Vec<usize> = census.tables.iter().map(|t| t.orbits.len()).collect();
    if counts != [10, 9, 8, 12, 8] || census.classes.len() != 47 {
        return Err(format!("orbit counts {counts:?}, total {}", census.classes.len()));
    }
    let sorted = |g: Order8| {
        let mut s = census.table(g).sizes();
        s.sort_unstable();
        s
    };
    let checks = [
        (sorted(Order8::Z4xZ2) == [1, 1, 1, 1, 2, 2, 2, 2, 4], "Z4xZ2 sizes"),
        (sorted(Order8::D8) == [1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2], "D8 sizes"),
        (sorted(Order8::Z8).iter().all(|&s| s == 1), "Z8 singletons"),
        (sorted(Order8::Q8).iter().all(|&s| s == 1), "Q8 singletons"),
        (sorted(Order8::Z2Cubed).iter().sum::<usize>() == 128, "Z2^3 sizes sum to 128"),
    ];
    match checks.iter().find(|(ok, _)| !ok) {
        Some((_, what)) => Err(format!("{what} wrong")),
        None => Ok("orbit counts 10/9/8/12/8 = 47 with expected size multisets".into()),
    }
}

fn criterion_5() -> Outcome {
    let cases: [(Order8, &[usize], &str, usize); 12] = [
        (Order8::Z8, &[0, 2, 4, 6], "Z8, index-2 subgroup", 2),
        (Order8::Z8, &[0, 4], "Z8, order-2 subgroup", 4),
        (Order8::D8, &[0, 1, 2, 3], "D8, <a>", 4),
        (Order8::D8, &[0, 2], "D8, <a^2>", 8),
        (Order8::Q8, &[0, 1, 2, 3], "Q8, <i>", 2),
        (Order8::Q8, &[0, 1], "Q8, <-1>", 4),
        (Order8::Z4xZ2, &[0, 2, 4, 6], "Z4xZ2, <(1,0)>", 4),
        (Order8::Z4xZ2, &[0, 1], "Z4xZ2, <(0,1)>", 4),
        (Order8::Z4xZ2, &[0, 1, 4, 5], "Z4xZ2, Klein subgroup", 2),
        (Order8::Z4xZ2, &[0, 4], "Z4xZ2, <(2,0)>", 8),
        (Order8::Z2Cubed, &[0, 1, 2, 3], "Z2^3, order-4 subgroup", 8),
        (Order8::Z2Cubed, &[0, 1], "Z2^3, order-2 subgroup", 64),
    ];
    let mut bad = Vec::new();
    for (g, sub, name, want) in cases {
        // omega_subgroup asserts that the realized set is a subgroup
        let got = omega_subgroup(g, sub).map_err(|e| e.to_string())?.len();
        if got != want {
            bad.push(format!("|Ω({name})| = {got}, expected {want}"));
        }
    }
    if bad.is_empty() {
        Ok("all twelve Ω(H;A) orders match and each Ω is a subgroup".into())
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let comp = common::computation();
    let p = &comp.partition;
    let mut multiset: BTreeMap<Vec<&str>, usize> = BTreeMap::new();
    let mut singletons = 0;
    for c in &p.classes {
        if c.members.len() == 1 {
            singletons += 1;
        } else {
            *multiset.entry(c.signature(&comp.census).iter().map(|g| g.name()).collect()).or_default() += 1;
        }
    }
    let expected: BTreeMap<Vec<&str>, usize> = [
        (vec!["Z2^3", "Z4xZ2"], 2),
        (vec!["Z2^3", "D8"], 2),
        (vec!["Z2^3", "D8", "Q8"], 1),
        (vec!["Z2^3", "Q8"], 1),
        (vec!["Z4xZ2", "Z8"], 2),
    ]
    .into_iter()
    .collect();
    if p.count() != 38 || singletons != 30 || multiset != expected {
        return Err(format!("{} classes, {singletons} singletons, merged {multiset:?}", p.count()));
    }
    let report = build_report(&ReportConfig::default(), comp).map_err(|e| e.to_string())?;
    if !report.morita.note.contains("36") || !report.morita.note.contains("38") {
        return Err(format!("report does not flag the 36-vs-38 tally: {}", report.morita.note));
    }
    Ok("38 Morita classes with the expected merged signatures; report flags the 36 tally".into())
}

fn criterion_7() -> Outcome {
    let d = &common::computation().doubles;
    if (d.commutative.len(), d.noncommutative.len()) == (18, 20) {
        Ok("18 commutative, 20 noncommutative; constant on every Morita class".into())
    } else {
        Err(format!("({}, {})", d.commutative.len(), d.noncommutative.len()))
    }
}

fn criterion_8() -> Outcome {
    common::run_seeds(1000, 1, common::check_dd_zero)?;
    common::run_seeds(200, 2, common::check_pullback_functoriality)?;
    common::run_seeds(100, 3, common::check_coboundary_invariance)?;
    common::run_seeds(100, 4, common::check_f_hat_shift)?;
    common::run_seeds(100, 5, common::check_epsilon_shift)?;
    common::run_seeds(100, 6, common::check_smith)?;
    let groups = common::check_stabilization()?;
    let census = &common::computation().census;
    for conv in [Convention::Standard, Convention::Inverse] {
        commutativity_by_tensor_class(census, conv).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "δδ=0 ×1000, functoriality ×200, coordinate/F̂/ε invariance ×100 each, SNF ×100, stabilization on {groups} cohomology groups, all 94 doubles associative"
    ))
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> Outcome); 8] =
        [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5), (6, criterion_6), (7, criterion_7), (8, criterion_8)];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(msg) => {
                println!("FAIL criterion {n}: {msg}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
