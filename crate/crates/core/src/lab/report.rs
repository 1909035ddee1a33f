//! Verdicts, counterexample shrinking and the suite report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{Class, Witness};
use crate::module::Submodule;

use super::corpus::{Corpus, CorpusConfig};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A re-checkable reason a theorem failed on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub summary: String,
    /// The definitional predicate the witness violates, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<Class>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// The witness with element names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rendered: Option<String>,
    /// The submodule the witness refers to; kept for re-checking, not serialized.
    #[serde(skip)]
    pub subject: Option<Submodule>,
}

impl Counterexample {
    pub fn summary(summary: impl Into<String>) -> Self {
        Counterexample {
            summary: summary.into(),
            predicate: None,
            witness: None,
            rendered: None,
            subject: None,
        }
    }

    /// A witness against `predicate` on `subject`.
    pub fn against(summary: impl Into<String>, predicate: Class, witness: Witness, subject: &Submodule) -> Self {
        Counterexample {
            summary: summary.into(),
            predicate: Some(predicate),
            rendered: Some(witness.render(subject.module())),
            witness: Some(witness),
            subject: Some(subject.clone()),
        }
    }

    /// `Some(true)` when the witness still violates its predicate, `None`
    /// when there is nothing to re-check.
    pub fn revalidates(&self) -> Option<bool> {
        match (&self.predicate, &self.witness, &self.subject) {
            (Some(c), Some(w), Some(p)) => Some(c.violates(p, w)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails { counterexample: Counterexample },
    Skipped { reason: String },
}

/// Result of one theorem on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub theorem: String,
    pub instance: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Sub-checks left out because of a cap, e.g. one characterization.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_parts: Vec<String>,
}

impl Verdict {
    pub fn holds(theorem: &str, instance: impl Into<String>) -> Self {
        Verdict {
            theorem: theorem.to_string(),
            instance: instance.into(),
            outcome: Outcome::Holds,
            note: None,
            skipped_parts: Vec::new(),
        }
    }

    pub fn fails(theorem: &str, instance: impl Into<String>, counterexample: Counterexample) -> Self {
        Verdict {
            outcome: Outcome::Fails { counterexample },
            ..Verdict::holds(theorem, instance)
        }
    }

    pub fn skipped(theorem: &str, instance: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict {
            outcome: Outcome::Skipped { reason: reason.into() },
            ..Verdict::holds(theorem, instance)
        }
    }

    /// `Holds` when `cx` is `None`.
    pub fn from_check(theorem: &str, instance: impl Into<String>, cx: Option<Counterexample>) -> Self {
        match cx {
            None => Verdict::holds(theorem, instance),
            Some(c) => Verdict::fails(theorem, instance, c),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_skipped_parts(mut self, parts: Vec<String>) -> Self {
        self.skipped_parts = parts;
        self
    }

    pub fn is_holds(&self) -> bool {
        matches!(self.outcome, Outcome::Holds)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, Outcome::Fails { .. })
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            Outcome::Fails { counterexample } => Some(counterexample),
            _ => None,
        }
    }
}

/// Shrinks each witness coordinate toward index 0 while the violation
/// persists, repeating until nothing moves. Verdicts without a re-checkable
/// witness come back unchanged.
pub fn minimize_counterexample(v: &Verdict) -> Verdict {
    let Some(cx) = v.counterexample() else {
        return v.clone();
    };
    let (Some(class), Some(w), Some(p)) = (cx.predicate, cx.witness.clone(), cx.subject.as_ref()) else {
        return v.clone();
    };
    if !class.violates(p, &w) {
        return v.clone();
    }
    let mut w = w;
    loop {
        let mut moved = false;
        for slot in 0..=w.scalars.len() {
            let current = if slot < w.scalars.len() {
                w.scalars[slot]
            } else {
                w.element
            };
            for cand in 0..current {
                let mut t = w.clone();
                if slot < t.scalars.len() {
                    t.scalars[slot] = cand;
                } else {
                    t.element = cand;
                }
                if class.violates(p, &t) {
                    w = t;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
    let mut out = v.clone();
    out.outcome = Outcome::Fails {
        counterexample: Counterexample {
            rendered: Some(w.render(p.module())),
            witness: Some(w),
            ..cx.clone()
        },
    };
    out
}

/// Per-theorem tallies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub title: String,
    pub checked: usize,
    pub passes: usize,
    pub failures: usize,
    pub skips: usize,
    pub counterexamples: Vec<(String, Counterexample)>,
    pub skip_reasons: BTreeMap<String, usize>,
    pub skipped_parts: BTreeMap<String, usize>,
    pub notes: Vec<(String, String)>,
}

/// Everything a suite run produced. `to_json` is the deterministic payload;
/// wall times live apart in `timings_json`.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: CorpusConfig,
    pub sampled: bool,
    pub rings: Vec<String>,
    pub modules: Vec<String>,
    pub tensors: Vec<String>,
    pub skipped_instances: Vec<(String, String)>,
    /// Theorem ids in registry order.
    pub order: Vec<String>,
    pub theorems: BTreeMap<String, TheoremSummary>,
    pub verdicts: Vec<Verdict>,
    /// Seconds of work per theorem, summed over its jobs.
    pub wall_time: BTreeMap<String, f64>,
}

impl SuiteReport {
    pub fn new(
        corpus: &Corpus,
        order: Vec<(String, String)>,
        verdicts: Vec<Verdict>,
        wall_time: BTreeMap<String, f64>,
    ) -> Self {
        let mut theorems: BTreeMap<String, TheoremSummary> = order
            .iter()
            .map(|(id, title)| {
                (
                    id.clone(),
                    TheoremSummary {
                        title: title.clone(),
                        ..TheoremSummary::default()
                    },
                )
            })
            .collect();
        for v in &verdicts {
            let t = theorems.get_mut(&v.theorem).expect("verdict for a selected theorem");
            t.checked += 1;
            match &v.outcome {
                Outcome::Holds => t.passes += 1,
                Outcome::Fails { counterexample } => {
                    t.failures += 1;
                    t.counterexamples.push((v.instance.clone(), counterexample.clone()));
                }
                Outcome::Skipped { reason } => {
                    t.skips += 1;
                    *t.skip_reasons.entry(reason.clone()).or_default() += 1;
                }
            }
            for part in &v.skipped_parts {
                *t.skipped_parts.entry(part.clone()).or_default() += 1;
            }
            if let Some(n) = &v.note {
                t.notes.push((v.instance.clone(), n.clone()));
            }
        }
        SuiteReport {
            config: corpus.config.clone(),
            sampled: corpus.sampled,
            rings: corpus.rings.iter().map(|r| r.label.clone()).collect(),
            modules: corpus.modules.iter().map(|m| m.label.clone()).collect(),
            tensors: corpus.tensors.iter().map(|t| t.label.clone()).collect(),
            skipped_instances: corpus
                .skipped
                .iter()
                .map(|s| (s.label.clone(), s.reason.clone()))
                .collect(),
            order: order.into_iter().map(|(id, _)| id).collect(),
            theorems,
            verdicts,
            wall_time,
        }
    }

    pub fn checked(&self) -> usize {
        self.theorems.values().map(|t| t.checked).sum()
    }

    pub fn passes(&self) -> usize {
        self.theorems.values().map(|t| t.passes).sum()
    }

    pub fn failures(&self) -> usize {
        self.theorems.values().map(|t| t.failures).sum()
    }

    pub fn skips(&self) -> usize {
        self.theorems.values().map(|t| t.skips).sum()
    }

    pub fn theorem(&self, id: &str) -> Option<&TheoremSummary> {
        self.theorems.get(id)
    }

    pub fn verdicts_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Verdict> + 'a {
        self.verdicts.iter().filter(move |v| v.theorem == id)
    }

    /// Deterministic machine-readable report: sorted keys, no timings.
    pub fn to_value(&self) -> Value {
        let theorems: serde_json::Map<String, Value> = self
            .theorems
            .iter()
            .map(|(id, t)| {
                let cx: Vec<Value> = t
                    .counterexamples
                    .iter()
                    .map(|(inst, c)| json!({"instance": inst, "counterexample": c}))
                    .collect();
                let notes: Vec<Value> = t.notes.iter().map(|(i, n)| json!({"instance": i, "note": n})).collect();
                (
                    id.clone(),
                    json!({
                        "title": t.title,
                        "checked": t.checked,
                        "passes": t.passes,
                        "failures": t.failures,
                        "skips": t.skips,
                        "counterexamples": cx,
                        "skip_reasons": t.skip_reasons,
                        "skipped_parts": t.skipped_parts,
                        "notes": notes,
                    }),
                )
            })
            .collect();
        let skipped: Vec<Value> = self
            .skipped_instances
            .iter()
            .map(|(l, r)| json!({"label": l, "reason": r}))
            .collect();
        json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "config": self.config,
            "sampled": self.sampled,
            "corpus": {
                "rings": self.rings,
                "modules": self.modules,
                "tensors": self.tensors,
                "skipped": skipped,
            },
            "theorem_order": self.order,
            "theorems": theorems,
            "summary": {
                "checked": self.checked(),
                "passes": self.passes(),
                "failures": self.failures(),
                "skips": self.skips(),
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn timings_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&json!({ "wall_time_seconds": self.wall_time })).expect("timings serialize");
        s.push('\n');
        s
    }

    /// Fixed-width table, one row per theorem in registry order.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<16} {:>8} {:>8} {:>8} {:>8} {:>9}\n",
            "theorem", "checked", "passes", "failures", "skips", "seconds"
        );
        for id in &self.order {
            let t = &self.theorems[id];
            out.push_str(&format!(
                "{:<16} {:>8} {:>8} {:>8} {:>8} {:>9.2}\n",
                id,
                t.checked,
                t.passes,
                t.failures,
                t.skips,
                self.wall_time.get(id).copied().unwrap_or(0.0)
            ));
        }
        out.push_str(&format!(
            "{:<16} {:>8} {:>8} {:>8} {:>8}\n",
            "total",
            self.checked(),
            self.passes(),
            self.failures(),
            self.skips()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::corpus::CorpusConfig;
    use crate::lab::fixtures;
    use crate::{construct::direct_sum, FiniteModule, FiniteRing};
    use std::sync::Arc;

    fn ex2_zero() -> Submodule {
        let z12 = Arc::new(FiniteRing::zmod(12).unwrap());
        let whole = Arc::new(FiniteModule::ring_as_module(&z12));
        let q2 = whole.quotient(&Submodule::generated(&whole, &[2]).unwrap()).unwrap().0;
        let q3 = whole.quotient(&Submodule::generated(&whole, &[3]).unwrap()).unwrap().0;
        Arc::new(direct_sum(&[&q2, &q3, &whole]).unwrap()).zero_submodule()
    }

    fn failing(w: Witness) -> Verdict {
        let p = ex2_zero();
        let cx = Counterexample::against("not c1ap", Class::ClassicalOneAbsorbingPrime, w, &p);
        Verdict::fails("demo", "ex2", cx)
    }

    #[test]
    fn minimizer_shrinks_to_the_least_slotwise_witness() {
        // (1,1,1) sits at 36 + 12 + 1 in row-major order.
        let v = failing(Witness::new(vec![2, 2, 3], 49));
        assert_eq!(v.counterexample().unwrap().revalidates(), Some(true));
        let m = minimize_counterexample(&v);
        let cx = m.counterexample().unwrap();
        assert_eq!(cx.rendered.as_deref(), Some("(2,2,3;(0,0,1))"));
        assert_eq!(cx.revalidates(), Some(true));
        assert_eq!(minimize_counterexample(&m), m);
    }

    #[test]
    fn minimizer_leaves_other_verdicts_alone() {
        let h = Verdict::holds("demo", "x");
        assert_eq!(minimize_counterexample(&h), h);
        let s = Verdict::skipped("demo", "x", "too big");
        assert_eq!(minimize_counterexample(&s), s);
        let f = Verdict::fails("demo", "x", Counterexample::summary("sizes differ"));
        assert_eq!(minimize_counterexample(&f), f);
        // A tuple that does not violate is not rewritten.
        let bogus = failing(Witness::new(vec![1, 1, 1], 0));
        assert_eq!(bogus.counterexample().unwrap().revalidates(), Some(false));
        assert_eq!(minimize_counterexample(&bogus), bogus);
    }

    #[test]
    fn tallies_and_payload() {
        let corpus = Corpus::generate(&CorpusConfig::empty()).unwrap();
        let order = vec![("a".to_string(), "A".to_string()), ("b".to_string(), "B".to_string())];
        let verdicts = vec![
            Verdict::holds("a", "i1"),
            Verdict::skipped("a", "i2", "cap"),
            Verdict::fails("b", "i1", Counterexample::summary("no")).with_note("n"),
            Verdict::holds("b", "i2").with_skipped_parts(vec!["part".into()]),
        ];
        let mut wall = BTreeMap::new();
        wall.insert("a".to_string(), 1.5);
        let r = SuiteReport::new(&corpus, order, verdicts, wall);
        assert_eq!((r.checked(), r.passes(), r.failures(), r.skips()), (4, 2, 1, 1));
        assert_eq!(r.checked(), r.passes() + r.failures() + r.skips());
        assert_eq!(r.theorem("a").unwrap().skip_reasons["cap"], 1);
        assert_eq!(r.theorem("b").unwrap().skipped_parts["part"], 1);
        assert_eq!(r.verdicts_for("b").count(), 2);
        let json = r.to_json();
        assert!(!json.contains("wall_time") && !json.contains("1.5"));
        assert!(r.timings_json().contains("1.5"));
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["summary"]["failures"], 1);
        assert_eq!(v["theorem_order"], json!(["a", "b"]));
        let table = r.table();
        assert!(table.lines().nth(1).unwrap().starts_with("a "));
        assert!(table.lines().last().unwrap().starts_with("total"));
    }

    #[test]
    fn fixture_witnesses_revalidate() {
        for f in fixtures().unwrap() {
            for (col, w) in &f.witnesses {
                assert!(!f.flags[col], "{} {col} has a witness {w} but holds", f.name);
            }
        }
    }
}
