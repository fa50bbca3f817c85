//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits 1 if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use fskit::algebra::{
    check_fs_algebra, congruence_filter_bijection_check, enumerate_modal_filters, modal_filter_generated, UpsetAlgebra,
    DEFAULT_CONGRUENCE_BOUND,
};
use fskit::amalgam::{
    chase_refute, check_coamalgam, check_pullback_properties, pullback, validate_formation, ChaseConfig, ChaseOutcome,
    CoVFormation, LogicClass, Mode,
};
use fskit::counterexample::{paper_formation, reflexive_variant, run_paper_demo};
use fskit::frame::Frame;
use fskit::random::{random_formation, random_fs_space, rng, FrameClass};
use fskit::semantics::{axiom_suite, Logic, DEFAULT_BUDGET};
use serde_json::json;

const SEED: u64 = 0x5eed;

struct Outcome {
    ok: bool,
    details: String,
}

fn outcome(ok: bool, details: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        details: details.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        let fast = took < limit;
        o.ok &= fast;
        o.details = format!("{}; {:.2?} (limit {:?})", o.details, took, limit);
    } else {
        o.details = format!("{}; {:.2?}", o.details, took);
    }
    o
}

fn frames_of(c: &CoVFormation) -> [(&'static str, &Arc<Frame>); 3] {
    [("base", c.base()), ("left", c.left()), ("right", c.right())]
}

fn pairs(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}

fn c1_counterexample() -> Outcome {
    let c = paper_formation();
    let mut fails = Vec::new();
    for (name, f) in frames_of(&c) {
        if !f.is_fs_space().holds {
            fails.push(format!("{name} is not an FS-space"));
        }
    }
    for (name, m) in [("f", c.f()), ("g", c.g())] {
        if !m.check_fs_morphism().holds || !m.is_surjective() {
            fails.push(format!("{name} is not a surjective FS-morphism"));
        }
    }
    match chase_refute(&c, Mode::FS, ChaseConfig::default()) {
        Ok(ChaseOutcome::Refuted(cert)) => {
            let con = cert.contradiction();
            if cert.elements != 4 || cert.splits != 0 {
                fails.push(format!("{} elements, {} splits", cert.elements, cert.splits));
            }
            if pairs(&con.candidates) != [("a0", "b2")] || pairs(&con.base_values) != [("k0", "k2")] {
                fails.push(format!("contradiction {con}"));
            }
            if let Err(e) = cert.replay(&c) {
                fails.push(format!("replay: {e}"));
            }
        }
        other => fails.push(format!("chase not refuted: {other:?}")),
    }
    if !run_paper_demo().all_pass() {
        fails.push("demo step failed".into());
    }
    if fails.is_empty() {
        outcome(
            true,
            "spaces, surjective morphisms, 4 elements, 0 splits, (a0,b2) over (k0,k2)",
        )
    } else {
        outcome(false, fails.join("; "))
    }
}

fn c2_reflexive_variant() -> Outcome {
    let c = reflexive_variant();
    let mut fails = Vec::new();
    if !validate_formation(&c, Mode::FS).holds {
        fails.push("variant formation fails FS checks".to_string());
    }
    for (name, f) in frames_of(&c) {
        for logic in [Logic::IKT, Logic::IS4] {
            if !axiom_suite(f, logic, DEFAULT_BUDGET).unwrap().holds {
                fails.push(format!("{name} fails {logic}"));
            }
        }
    }
    match chase_refute(&c, Mode::FS, ChaseConfig::default()) {
        Ok(ChaseOutcome::Refuted(cert)) if cert.replay(&c).is_ok() => {}
        other => fails.push(format!("variant not refuted: {other:?}")),
    }
    for (name, f) in frames_of(&paper_formation()) {
        let cls = f.classify();
        if !cls.transitive.holds || !cls.igl_wf.holds {
            fails.push(format!("{name} is not TRANSITIVE and IGL_WF"));
        }
    }
    if fails.is_empty() {
        outcome(
            true,
            "FS checks, IKT and IS4 on all frames, refuted; base frames TRANSITIVE and IGL_WF",
        )
    } else {
        outcome(false, fails.join("; "))
    }
}

fn fs_pool() -> Vec<Frame> {
    let mut r = rng(SEED);
    (0..200).map(|_| random_fs_space(&mut r, 5)).collect()
}

fn c3_ik_on_pool(pool: &[Frame]) -> Outcome {
    let failing: Vec<usize> = (0..pool.len())
        .filter(|&i| !axiom_suite(&pool[i], Logic::IK, DEFAULT_BUDGET).unwrap().holds)
        .collect();
    let spaces = pool
        .iter()
        .all(|f| f1_by_triples(f) && f2_by_triples(f) && mixed_by_triples(f));
    outcome(
        failing.is_empty() && spaces && pool.iter().all(|f| f.len() <= 5),
        format!("{} frames, {} failing IK", pool.len(), failing.len()),
    )
}

struct Correspondence {
    reflexive: usize,
    transitive: usize,
    mismatches: usize,
}

fn correspondence(pool: &[Frame]) -> Correspondence {
    let mut c = Correspondence {
        reflexive: 0,
        transitive: 0,
        mismatches: 0,
    };
    for f in pool {
        let (refl, trans) = (reflexive_by_nodes(f), transitive_by_triples(f));
        c.reflexive += refl as usize;
        c.transitive += trans as usize;
        let t = axiom_suite(f, Logic::IKT, DEFAULT_BUDGET).unwrap().holds;
        let k4 = axiom_suite(f, Logic::IK4, DEFAULT_BUDGET).unwrap().holds;
        let lib_agrees = f.check_reflexive().holds == refl && f.check_transitive().holds == trans;
        if t != refl || k4 != trans || !lib_agrees {
            c.mismatches += 1;
        }
    }
    c
}

fn c4_correspondence(pool: &[Frame]) -> Outcome {
    let c = correspondence(pool);
    outcome(
        c.mismatches == 0,
        format!(
            "{} reflexive, {} transitive, {} mismatches",
            c.reflexive, c.transitive, c.mismatches
        ),
    )
}

fn c5_dual_of_base() -> Outcome {
    let z = fskit::counterexample::frame_z();
    let alg = UpsetAlgebra::dual_of(&z).unwrap();
    let a = alg.algebra();
    let oracle = upset_count(&z);
    let axioms = check_fs_algebra(a).unwrap().holds;
    // residuation from the raw tables: c ≤ a → b iff c ∧ a ≤ b
    let le = |x: usize, y: usize| a.meet[x][y] == x;
    let n = a.size;
    let mut bad = 0usize;
    for x in 0..n {
        for y in 0..n {
            for c in 0..n {
                if le(c, a.himp[x][y]) != le(a.meet[c][x], y) {
                    bad += 1;
                }
            }
        }
    }
    outcome(
        alg.len() == 45 && oracle == 45 && axioms && bad == 0,
        format!(
            "{} elements (oracle {oracle}), axioms {}, {} of {} triples violate residuation",
            alg.len(),
            if axioms { "hold" } else { "fail" },
            bad,
            n * n * n
        ),
    )
}

fn c6_filters_and_congruences() -> Outcome {
    let mut frames = 0usize;
    let mut seen = BTreeSet::new();
    let mut fails = Vec::new();
    for n in 0..=3 {
        for f in all_frames(n) {
            if !f.is_fs_frame().holds {
                continue;
            }
            frames += 1;
            let a = UpsetAlgebra::dual_of(&f).unwrap().into_algebra();
            if !seen.insert(serde_json::to_string(&a).unwrap()) {
                continue;
            }
            let rep = congruence_filter_bijection_check(&a, DEFAULT_CONGRUENCE_BOUND).unwrap();
            let filters = brute_modal_filters(&a);
            let congruences = brute_congruences(&a);
            let lib: BTreeSet<BTreeSet<usize>> = enumerate_modal_filters(&a)
                .iter()
                .map(|m| m.to_vec().into_iter().collect())
                .collect();
            if !rep.holds
                || rep.modal_filters != rep.congruences
                || rep.modal_filters != filters.len()
                || rep.congruences != congruences.len()
                || lib != filters.iter().cloned().collect()
            {
                fails.push(format!("{f:?}"));
                continue;
            }
            for x in 0..a.size {
                for y in x..a.size {
                    let got: BTreeSet<usize> = modal_filter_generated(&a, &[x, y]).to_vec().into_iter().collect();
                    if got != least_filter_containing(&filters, &[x, y]) {
                        fails.push(format!("generated filter of {x},{y} in {f:?}"));
                    }
                }
            }
        }
    }
    outcome(
        fails.is_empty(),
        format!(
            "{frames} FS-frames, {} distinct algebras, {} failures{}",
            seen.len(),
            fails.len(),
            fails.first().map(|s| format!(": {s}")).unwrap_or_default()
        ),
    )
}

fn c7_chase_on_amalgamable() -> Outcome {
    let mut r = rng(SEED + 7);
    let mut formations = Vec::new();
    for _ in 0..50 {
        formations.push(CoVFormation::identity(Arc::new(random_fs_space(&mut r, 5))));
    }
    let mut tries = 0;
    let mut derived = 0;
    while derived < 50 && tries < 10_000 {
        tries += 1;
        let c = random_formation(&mut r, Mode::FS, FrameClass::Any, 5);
        let pb = pullback(&c);
        if check_coamalgam(&c, &pb.frame, &pb.p1, &pb.p2, Mode::FS).unwrap().holds {
            formations.push(c);
            derived += 1;
        }
    }
    let refuted = formations
        .iter()
        .filter(|c| {
            !matches!(
                chase_refute(c, Mode::FS, ChaseConfig::default()),
                Ok(ChaseOutcome::Inconclusive(_))
            )
        })
        .count();
    outcome(
        derived == 50 && refuted == 0,
        format!("50 identity + {derived} pullback-derived formations, {refuted} not inconclusive"),
    )
}

fn c8_ik_pullbacks() -> Outcome {
    let mut r = rng(SEED + 8);
    let classes = [
        (LogicClass::IT, FrameClass::Reflexive),
        (LogicClass::IK4, FrameClass::Transitive),
        (LogicClass::IS4, FrameClass::Preorder),
    ];
    let mut fails = Vec::new();
    for i in 0..100 {
        let (class, fc) = classes[i % 3];
        let c = random_formation(&mut r, Mode::IK, fc, 5);
        let frames_small = frames_of(&c).iter().all(|(_, f)| f.len() <= 5);
        match check_pullback_properties(&c, class) {
            Ok(rep) if rep.holds && frames_small => {}
            Ok(rep) => fails.push(format!("{class}: {}", rep.summary())),
            Err(e) => fails.push(format!("{class}: {e}")),
        }
    }
    outcome(
        fails.is_empty(),
        format!(
            "100 formations, {} failures{}",
            fails.len(),
            fails.first().map(|s| format!(": {s}")).unwrap_or_default()
        ),
    )
}

/// Everything the suite reports, as JSON.
fn report_json() -> String {
    let pool = fs_pool();
    let corr = correspondence(&pool);
    let cert = chase_refute(&paper_formation(), Mode::FS, ChaseConfig::default()).unwrap();
    let variant = chase_refute(&reflexive_variant(), Mode::FS, ChaseConfig::default()).unwrap();
    let pool_json: Vec<_> = pool.iter().map(fskit::io::FrameDoc::of).collect();
    serde_json::to_string_pretty(&json!({
        "demo": run_paper_demo(),
        "certificate": cert,
        "variant_certificate": variant,
        "pool": pool_json,
        "correspondence": {
            "reflexive": corr.reflexive,
            "transitive": corr.transitive,
            "mismatches": corr.mismatches,
        },
    }))
    .unwrap()
}

fn c9_determinism() -> Outcome {
    let (a, b) = (report_json(), report_json());
    let bin = env!("CARGO_BIN_EXE_fskit");
    let cli = || {
        Command::new(bin)
            .args(["paper-demo", "--format", "json"])
            .output()
            .map(|o| o.stdout)
            .unwrap_or_default()
    };
    let (c, d) = (cli(), cli());
    outcome(
        a == b && !c.is_empty() && c == d,
        format!(
            "library report {} bytes, CLI report {} bytes, both identical across runs",
            a.len(),
            c.len()
        ),
    )
}

fn main() {
    let pool = fs_pool();
    let five = Some(Duration::from_secs(5));
    let minute = Some(Duration::from_secs(60));
    let results = [
        ("1 counterexample formation", timed(five, c1_counterexample)),
        ("2 reflexive variant", timed(five, c2_reflexive_variant)),
        ("3 IK on 200 random FS-frames", timed(minute, || c3_ik_on_pool(&pool))),
        (
            "4 REFLEXIVE<->IKT, TRANSITIVE<->IK4",
            timed(None, || c4_correspondence(&pool)),
        ),
        ("5 dual algebra of Z", timed(None, c5_dual_of_base)),
        (
            "6 filters and congruences, <=3 nodes",
            timed(None, c6_filters_and_congruences),
        ),
        (
            "7 chase inconclusive on amalgamable formations",
            timed(None, c7_chase_on_amalgamable),
        ),
        ("8 iT/iK4/iS4 pullbacks", timed(None, c8_ik_pullbacks)),
        ("9 deterministic JSON reports", timed(None, c9_determinism)),
    ];
    let width = results.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    for (name, o) in &results {
        println!("{} {name:width$}  {}", if o.ok { "PASS" } else { "FAIL" }, o.details);
    }
    let passed = results.iter().filter(|(_, o)| o.ok).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
