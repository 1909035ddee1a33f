//! Falsification harness: a deterministic corpus, one checker per result and
//! a report that merges verdicts in canonical order.

pub mod corpus;
pub mod report;
pub mod theorems;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::Class;
use crate::construct::direct_sum;
use crate::error::Result;
use crate::module::{FiniteModule, Submodule};
use crate::ring::{FiniteRing, Ideal};

pub use corpus::{Caps, Corpus, CorpusConfig, ModuleEntry, Recipe, Recipes, RingEntry, Structure};
pub use report::{minimize_counterexample, Counterexample, Outcome, SuiteReport, TheoremSummary, Verdict};
pub use theorems::{cormain_statement, select, theorem, CormainOutcome, Scope, Target, Theorem, THEOREMS};

/// Runs one theorem on every applicable instance of a corpus.
pub fn verify(corpus: &Corpus, id: &str) -> Result<Vec<Verdict>> {
    let t = theorem(id)?;
    let mut out = Vec::new();
    for target in t.targets(corpus) {
        out.extend(t.check(corpus, target)?.iter().map(minimize_counterexample));
    }
    Ok(out)
}

/// Generates the corpus and runs the selected theorems over it.
pub fn run_suite(config: &CorpusConfig) -> Result<SuiteReport> {
    let corpus = Corpus::generate(config)?;
    run_on(&corpus)
}

/// Runs the theorems selected by `corpus.config` over an existing corpus.
pub fn run_on(corpus: &Corpus) -> Result<SuiteReport> {
    let chosen = select(&corpus.config.theorems)?;
    let jobs: Vec<(usize, &Theorem, Target)> = chosen
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.targets(corpus).into_iter().map(move |x| (i, *t, x)))
        .collect();
    let results: Vec<(usize, f64, Vec<Verdict>)> = jobs
        .par_iter()
        .map(|&(i, t, target)| {
            let start = Instant::now();
            let verdicts = t
                .check(corpus, target)
                .expect("targets come from the theorem itself")
                .iter()
                .map(minimize_counterexample)
                .collect();
            (i, start.elapsed().as_secs_f64(), verdicts)
        })
        .collect();
    let mut wall = BTreeMap::new();
    let mut tagged = Vec::new();
    for (i, secs, verdicts) in results {
        *wall.entry(chosen[i].id.to_string()).or_insert(0.0) += secs;
        tagged.extend(verdicts.into_iter().map(|v| (i, v)));
    }
    tagged.sort_by(|(i, a), (j, b)| i.cmp(j).then_with(|| a.instance.cmp(&b.instance)));
    let order = chosen.iter().map(|t| (t.id.to_string(), t.title.to_string())).collect();
    Ok(SuiteReport::new(
        corpus,
        order,
        tagged.into_iter().map(|(_, v)| v).collect(),
        wall,
    ))
}

/// A small instance whose classification is pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedFixture {
    pub name: String,
    pub module: String,
    pub submodule: String,
    pub flags: BTreeMap<String, bool>,
    /// Least violating tuple for each false flag, with element names.
    pub witnesses: BTreeMap<String, String>,
}

fn pin(name: &str, p: &Submodule) -> Result<PinnedFixture> {
    let mut flags = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for c in Class::ALL {
        let d = c.decide(p)?;
        flags.insert(c.column().to_string(), d.holds());
        if let Some(w) = d.witness() {
            witnesses.insert(c.column().to_string(), w.render(p.module()));
        }
    }
    Ok(PinnedFixture {
        name: name.to_string(),
        module: p.module().label().to_string(),
        submodule: p.short_name(),
        flags,
        witnesses,
    })
}

/// The pinned fixtures: `{0}` in `Z4`, `{0}` in `Z12/<2>+Z12/<3>+Z12` over
/// `Z12`, and `<4>` in `Z8` with its ideal-level flags.
pub fn fixtures() -> Result<Vec<PinnedFixture>> {
    let z4 = Arc::new(FiniteModule::ring_as_module(&Arc::new(FiniteRing::zmod(4)?)));

    let z12 = Arc::new(FiniteRing::zmod(12)?);
    let whole = Arc::new(FiniteModule::ring_as_module(&z12));
    let q2 = whole.quotient(&Submodule::generated(&whole, &[2])?)?.0;
    let q3 = whole.quotient(&Submodule::generated(&whole, &[3])?)?.0;
    let ex2 = Arc::new(direct_sum(&[&q2, &q3, &whole])?);

    let z8r = Arc::new(FiniteRing::zmod(8)?);
    let z8 = Arc::new(FiniteModule::ring_as_module(&z8r));
    let four = Submodule::generated(&z8, &[4])?;
    let mut ideal_fixture = pin("Z8 <4>", &four)?;
    let ideal = Ideal::generated(&z8r, &[4])?;
    ideal_fixture
        .flags
        .insert("ideal_prime".into(), ideal.is_prime()?.holds());
    ideal_fixture
        .flags
        .insert("ideal_1abs_prime".into(), ideal.is_one_absorbing_prime()?.holds());

    Ok(vec![
        pin("Z4 zero", &z4.zero_submodule())?,
        pin("Z12 ternary zero", &ex2.zero_submodule())?,
        ideal_fixture,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_fixtures() {
        let f = fixtures().unwrap();
        assert_eq!(f.len(), 3);
        let z4 = &f[0];
        assert!(!z4.flags["prime"] && z4.flags["classical_1abs_prime"]);
        let ex2 = &f[1];
        assert!(!ex2.flags["classical_1abs_prime"]);
        assert_eq!(ex2.witnesses["classical_1abs_prime"], "(2,2,3;(0,0,1))");
        let z8 = &f[2];
        assert!(!z8.flags["ideal_prime"] && z8.flags["ideal_1abs_prime"]);
        assert!(z8.flags["classical_1abs_prime"]);
    }

    #[test]
    fn empty_config_gives_empty_report() {
        let r = run_suite(&CorpusConfig::empty()).unwrap();
        assert_eq!(r.checked(), 0);
        assert_eq!(r.order.len(), THEOREMS.len());
    }

    #[test]
    fn small_run_has_no_failures() {
        let mut cfg = CorpusConfig::empty();
        cfg.zmods = vec![4, 6, 8];
        cfg.theorems = vec!["p1".into(), "tmain".into(), "cormain".into()];
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.order, ["p1", "tmain", "cormain_i", "cormain_ii"]);
        assert!(r.checked() > 0);
        assert_eq!(r.failures(), 0);
        let corpus = Corpus::generate(&cfg).unwrap();
        let direct = verify(&corpus, "p1").unwrap();
        let from_suite: Vec<&Verdict> = r.verdicts_for("p1").collect();
        assert_eq!(direct.len(), from_suite.len());
        assert!(verify(&corpus, "nope").is_err());
    }
}
