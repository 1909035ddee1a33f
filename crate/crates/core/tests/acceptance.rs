//! One line per acceptance criterion. Criteria that are known to be
//! unattainable as worded are expected to fail; the run errors if the set of
//! failing criteria differs from that list.

use std::collections::BTreeSet;
use std::time::Instant;

use c1abs::classify::{is_classical_one_absorbing_prime, is_classical_prime};
use c1abs::lab::corpus::RingKind;
use c1abs::lab::{
    cormain_statement, fixtures, run_on, run_suite, Corpus, CorpusConfig, PinnedFixture, Structure, SuiteReport,
};
use c1abs::{FiniteModule, FiniteRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose wording cannot be met, with the reason.
const KNOWN_RED: &[(u32, &str)] = &[(
    4,
    "the zero submodule of Z12/<2>+Z12/<3>+Z12 is not classical 2-absorbing (a=b=2, c=3, m=(0,0,1)), and its least witness has m=(0,0,1), not (1,1,1)",
)];

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn suite(ids: &[&str]) -> (SuiteReport, f64) {
    let cfg = CorpusConfig {
        theorems: ids.iter().map(|s| s.to_string()).collect(),
        ..CorpusConfig::default()
    };
    let start = Instant::now();
    let r = run_suite(&cfg).expect("default corpus runs");
    (r, start.elapsed().as_secs_f64())
}

fn tally(r: &SuiteReport, ids: &[&str]) -> (usize, usize, usize) {
    ids.iter().fold((0, 0, 0), |(c, f, s), id| {
        let t = r.theorem(id).expect("selected");
        (c + t.checked, f + t.failures, s + t.skips)
    })
}

fn chain(r: &SuiteReport, secs: f64) -> Line {
    let ids = ["p1", "pro2", "semiprime"];
    let (checked, failures, skips) = tally(r, &ids);
    Line {
        id: 1,
        title: "implication chain p1, pro2, semiprime",
        pass: checked > 0 && failures == 0 && skips == 0 && secs < 60.0,
        detail: format!("{checked} checked, {failures} failures, {skips} skips, {secs:.1}s (limit 60s)"),
    }
}

fn oracles(full: &SuiteReport) -> Line {
    let ids = ["tmain", "tmain2"];
    let (checked, failures, skips) = tally(full, &ids);
    let parts: usize = ids
        .iter()
        .map(|id| full.theorem(id).unwrap().skipped_parts.values().sum::<usize>())
        .sum();
    Line {
        id: 2,
        title: "oracle agreement tmain, tmain2",
        pass: checked > 0 && failures == 0 && skips == 0,
        detail: format!("{checked} instances, {failures} disagreements, {parts} cap-skipped forms"),
    }
}

fn dichotomy(corpus: &Corpus) -> Line {
    let mut problems = Vec::new();
    let mut z8_witness = String::new();
    for (label, expect) in [("Z4", true), ("Z9", true), ("Z6", false), ("Z8", false), ("Z12", false)] {
        let ri = corpus.find_ring(label).expect("catalog ring");
        let o = cormain_statement(corpus, ri);
        if o.statement != Some(expect) || o.prediction != expect {
            problems.push(format!(
                "{label}: statement {:?}, prediction {}",
                o.statement, o.prediction
            ));
        }
        if !expect {
            match &o.witness {
                Some((_, cx)) if cx.revalidates() == Some(true) => {}
                _ => problems.push(format!("{label}: no re-validating witness")),
            }
        }
        if label == "Z8" {
            if let Some((inst, cx)) = &o.witness {
                z8_witness = format!("{inst} {}", cx.rendered.clone().unwrap_or_default());
            }
        }
    }
    if z8_witness != "Z8 | Z8 | 0 (2,2,2;1)" {
        problems.push(format!("Z8 witness is {z8_witness}"));
    }
    Line {
        id: 3,
        title: "cormain dichotomy",
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("Z4, Z9 true; Z6, Z8, Z12 false; Z8 witness {z8_witness}")
        } else {
            problems.join("; ")
        },
    }
}

fn pinned() -> Line {
    let got = fixtures().expect("fixtures build");
    let golden: Vec<PinnedFixture> = serde_json::from_str(include_str!("golden/fixtures.json")).expect("golden parses");
    let find = |name: &str| got.iter().find(|f| f.name == name).expect("fixture present");
    let (z4, ex2, z8) = (find("Z4 zero"), find("Z12 ternary zero"), find("Z8 <4>"));
    let checks = [
        ("Z4 zero classical 1-absorbing prime", z4.flags["classical_1abs_prime"]),
        ("Z4 zero not classical prime", !z4.flags["classical_prime"]),
        ("ternary zero classical 2-absorbing", ex2.flags["classical_2abs"]),
        (
            "ternary zero not classical 1-absorbing prime",
            !ex2.flags["classical_1abs_prime"],
        ),
        (
            "ternary witness (2,2,3;(1,1,1))",
            ex2.witnesses.get("classical_1abs_prime").map(String::as_str) == Some("(2,2,3;(1,1,1))"),
        ),
        ("Z8 <4> 1-absorbing prime ideal", z8.flags["ideal_1abs_prime"]),
        ("Z8 <4> not prime ideal", !z8.flags["ideal_prime"]),
        ("golden report matches", got == golden),
    ];
    let red: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Line {
        id: 4,
        title: "pinned fixtures",
        pass: red.is_empty(),
        detail: format!(
            "{}/{} sub-checks; failing: [{}]; ternary witness is {}",
            checks.len() - red.len(),
            checks.len(),
            red.join(", "),
            ex2.witnesses.get("classical_1abs_prime").map_or("none", String::as_str)
        ),
    }
}

fn amalgams(r: &SuiteReport, secs: f64) -> Line {
    let ids = ["lemfin", "lemfin3", "tmainnn"];
    let (checked, failures, skips) = tally(r, &ids);
    Line {
        id: 5,
        title: "amalgam suite lemfin, lemfin3, tmainnn",
        pass: checked > 0 && failures == 0 && skips == 0 && secs < 120.0,
        detail: format!("{checked} checked, {failures} failures, {skips} skips, {secs:.1}s (limit 120s)"),
    }
}

fn products(corpus: &Corpus, full: &SuiteReport) -> c1abs::Result<Line> {
    let (mut subs, mut modules, mut ternary, mut bad) = (0, 0, 0, Vec::new());
    for e in &corpus.modules {
        let Structure::Product(pm) = &e.structure else { continue };
        modules += 1;
        if pm.factors().len() == 3 {
            ternary += 1;
        }
        for p in e.module.all_submodules()?.into_iter().filter(|p| p.is_proper()) {
            subs += 1;
            let parts = pm.components(&p)?;
            let mut shape = false;
            for (i, c) in parts.iter().enumerate() {
                let rest_whole = parts.iter().enumerate().all(|(j, d)| j == i || !d.is_proper());
                shape |= rest_whole && c.is_proper() && is_classical_prime(c)?.holds();
            }
            let c1ap = is_classical_one_absorbing_prime(&p)?.holds();
            let cp = is_classical_prime(&p)?.holds();
            if !(c1ap == cp && cp == shape) {
                bad.push(e.instance(&p.short_name()));
            }
        }
    }
    let tcar = full.theorem("tcar").unwrap();
    Ok(Line {
        id: 6,
        title: "product suite",
        pass: modules > 0 && ternary > 0 && bad.is_empty() && tcar.failures == 0,
        detail: format!(
            "{subs} submodules of {modules} product modules ({ternary} ternary), {} mismatches; tcar {} failures",
            bad.len(),
            tcar.failures
        ),
    })
}

fn tensors(full: &SuiteReport) -> Line {
    let t = full.theorem("ttensor").unwrap();
    Line {
        id: 7,
        title: "free tensors k = 2, 3",
        pass: t.checked > 0 && t.failures == 0 && t.skips == 0,
        detail: format!(
            "{} checked over {} tensors, {} failures, {} skips",
            t.checked,
            full.tensors.len(),
            t.failures,
            t.skips
        ),
    }
}

fn mclosed(corpus: &Corpus, full: &SuiteReport) -> Line {
    let ids = ["pro9", "tkrull"];
    let (checked, failures, _) = tally(full, &ids);
    // Every module with |M| <= 16 over a ring with <= 16 ideals must have been checked.
    let in_scope: BTreeSet<String> = corpus
        .modules
        .iter()
        .filter(|e| e.module.size() <= 16 && e.module.ring().clone().ideals().is_ok_and(|i| i.len() <= 16))
        .map(|e| e.label.clone())
        .collect();
    let skipped_in_scope = ids
        .iter()
        .flat_map(|id| full.verdicts_for(id))
        .filter(|v| {
            v.is_skipped()
                && in_scope
                    .iter()
                    .any(|l| v.instance == *l || v.instance.starts_with(&format!("{l} | ")))
        })
        .count();
    Line {
        id: 8,
        title: "m-closed sets pro9, tkrull",
        pass: checked > 0 && failures == 0 && skipped_in_scope == 0,
        detail: format!(
            "{checked} checked, {failures} failures, {} modules in scope, {skipped_in_scope} skipped in scope",
            in_scope.len()
        ),
    }
}

fn determinism(full: &SuiteReport, second: &SuiteReport) -> Line {
    let (a, b) = (full.to_json(), second.to_json());
    Line {
        id: 9,
        title: "deterministic reports",
        pass: a == b,
        detail: format!("{} bytes, identical: {}", a.len(), a == b),
    }
}

fn mutations(corpus: &Corpus) -> c1abs::Result<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let catalog: Vec<_> = corpus
        .rings
        .iter()
        .filter(|r| r.catalog || matches!(r.kind, RingKind::Amalgam(_)))
        .collect();
    let (mut tried, mut caught, mut missed) = (0, 0, Vec::new());
    for _ in 0..240 {
        let detected;
        let what;
        if rng.gen_bool(0.5) {
            let r = &catalog[rng.gen_range(0..catalog.len())].ring;
            let n = r.size();
            let (mut add, mut mul) = (r.add_table(), r.mul_table());
            let use_mul = rng.gen_bool(0.5);
            let t = if use_mul { &mut mul } else { &mut add };
            let cell = rng.gen_range(0..t.len());
            t[cell] = (t[cell] + rng.gen_range(1..n)) % n;
            let m = FiniteRing::from_tables("mutant", n, add, mul, r.zero(), r.one(), None)?;
            detected = !m.validate().is_empty();
            what = format!("{} {} cell {cell}", r.label(), if use_mul { "mul" } else { "add" });
        } else {
            let e = &corpus.modules[rng.gen_range(0..corpus.modules.len())];
            let m = &e.module;
            let k = m.size();
            if k < 2 {
                continue;
            }
            let (mut add, mut act) = (m.add_table(), m.action_table());
            let use_act = rng.gen_bool(0.5);
            let t = if use_act { &mut act } else { &mut add };
            let cell = rng.gen_range(0..t.len());
            t[cell] = (t[cell] + rng.gen_range(1..k)) % k;
            let mutant = FiniteModule::from_tables("mutant", m.ring().clone(), k, add, act, m.zero(), None)?;
            detected = !mutant.validate().is_empty();
            what = format!("{} {} cell {cell}", e.label, if use_act { "action" } else { "add" });
        }
        tried += 1;
        if detected {
            caught += 1;
        } else {
            missed.push(what);
        }
    }
    Ok(Line {
        id: 10,
        title: "validator sensitivity",
        pass: tried >= 100 && caught == tried,
        detail: format!(
            "{caught}/{tried} single-cell mutations detected{}",
            if missed.is_empty() {
                String::new()
            } else {
                format!("; missed {missed:?}")
            }
        ),
    })
}

fn main() -> c1abs::Result<()> {
    // The libtest flags cargo passes (e.g. --list) are not meaningful here.
    if std::env::args().any(|a| a == "--list") {
        return Ok(());
    }
    let (r1, s1) = suite(&["p1", "pro2", "semiprime"]);
    let (r5, s5) = suite(&["lemfin", "lemfin3", "tmainnn"]);
    let corpus = Corpus::generate(&CorpusConfig::default())?;
    let full = run_on(&corpus)?;
    let second = run_suite(&CorpusConfig::default())?;

    let lines = vec![
        chain(&r1, s1),
        oracles(&full),
        dichotomy(&corpus),
        pinned(),
        amalgams(&r5, s5),
        products(&corpus, &full)?,
        tensors(&full),
        mclosed(&corpus, &full),
        determinism(&full, &second),
        mutations(&corpus)?,
    ];
    for l in &lines {
        println!(
            "criterion {:>2} {} {}: {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.title,
            l.detail
        );
    }
    for (id, why) in KNOWN_RED {
        println!("criterion {id:>2} is expected to fail: {why}");
    }
    let red: BTreeSet<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    let expected: BTreeSet<u32> = KNOWN_RED.iter().map(|(id, _)| *id).collect();
    if red != expected {
        eprintln!("failing criteria {red:?} differ from the analyzed set {expected:?}");
        std::process::exit(1);
    }
    println!(
        "acceptance: {} of {} criteria pass; failures match the analyzed set",
        lines.len() - red.len(),
        lines.len()
    );
    Ok(())
}
