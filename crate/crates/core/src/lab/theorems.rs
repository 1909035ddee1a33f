//! One checker per result, each a falsifiable property over corpus instances.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::bits::Bits;
use crate::classify::{
    c1ap_sweep_factor, is_c1ap_m_closed, maximal_disjoint_submodules, minimal_classical_1abs_primes, Characterization,
    Class, OracleOutcome,
};
use crate::construct::{direct_sum, FreeTensor};
use crate::error::{Error, Result};
use crate::module::{FiniteModule, ModuleHom, Submodule};
use crate::ring::Ideal;

use super::corpus::{Classified, Corpus, ModuleEntry, RingKind, Structure};
use super::report::{Counterexample, Verdict};

use Class::{ClassicalOneAbsorbingPrime as C1ap, ClassicalPrime as Cp, ClassicalTwoAbsorbing as C2abs};

/// What a theorem is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Every module entry; the checker decides applicability.
    Module,
    /// Every catalog ring.
    CatalogRing,
    /// Every amalgam ring of the catalog.
    AmalgamRing,
    /// Every free-module instance `M^k`.
    Tensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Module(usize),
    Ring(usize),
    Tensor(usize),
}

type Checker = fn(&Corpus, usize) -> Vec<Verdict>;

pub struct Theorem {
    pub id: &'static str,
    pub title: &'static str,
    pub scope: Scope,
    check: Checker,
}

impl std::fmt::Debug for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Theorem").field("id", &self.id).finish()
    }
}

impl Theorem {
    /// Every target of this theorem in the corpus, in corpus order.
    pub fn targets(&self, corpus: &Corpus) -> Vec<Target> {
        match self.scope {
            Scope::Module => (0..corpus.modules.len()).map(Target::Module).collect(),
            Scope::CatalogRing => (0..corpus.rings.len())
                .filter(|&i| corpus.rings[i].catalog)
                .map(Target::Ring)
                .collect(),
            Scope::AmalgamRing => (0..corpus.rings.len())
                .filter(|&i| matches!(corpus.rings[i].kind, RingKind::Amalgam(_)))
                .map(Target::Ring)
                .collect(),
            Scope::Tensor => (0..corpus.tensors.len()).map(Target::Tensor).collect(),
        }
    }

    pub fn check(&self, corpus: &Corpus, target: Target) -> Result<Vec<Verdict>> {
        let i = match (self.scope, target) {
            (Scope::Module, Target::Module(i)) if i < corpus.modules.len() => i,
            (Scope::CatalogRing | Scope::AmalgamRing, Target::Ring(i)) if i < corpus.rings.len() => i,
            (Scope::Tensor, Target::Tensor(i)) if i < corpus.tensors.len() => i,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{target:?} is not a target of {}",
                    self.id
                )))
            }
        };
        Ok((self.check)(corpus, i))
    }
}

pub static THEOREMS: &[Theorem] = &[
    Theorem {
        id: "p1",
        title: "classical prime => classical 1-absorbing prime => classical 2-absorbing",
        scope: Scope::Module,
        check: p1,
    },
    Theorem {
        id: "pro2",
        title: "1-absorbing prime => classical 1-absorbing prime",
        scope: Scope::Module,
        check: pro2,
    },
    Theorem {
        id: "semiprime",
        title: "classical prime <=> classical 1-absorbing prime and semiprime",
        scope: Scope::Module,
        check: semiprime,
    },
    Theorem {
        id: "thom_i",
        title: "preimages of classical 1-absorbing primes",
        scope: Scope::Module,
        check: thom_i,
    },
    Theorem {
        id: "thom_ii",
        title: "images under surjections of classical 1-absorbing primes containing the kernel",
        scope: Scope::Module,
        check: thom_ii,
    },
    Theorem {
        id: "cor1",
        title: "P is classical 1-absorbing prime iff P/L is, for L in P",
        scope: Scope::Module,
        check: cor1,
    },
    Theorem {
        id: "tmain",
        title: "element and ideal characterizations",
        scope: Scope::Module,
        check: tmain,
    },
    Theorem {
        id: "cormain_i",
        title: "ideals of A: classical 1-absorbing prime iff 1-absorbing prime ideal",
        scope: Scope::Module,
        check: cormain_i,
    },
    Theorem {
        id: "cormain_ii",
        title: "every proper submodule is classical 1-absorbing prime iff A local with m^2 = 0",
        scope: Scope::CatalogRing,
        check: cormain_ii,
    },
    Theorem {
        id: "pro4",
        title: "intersections of chains",
        scope: Scope::Module,
        check: pro4,
    },
    Theorem {
        id: "tnoetherian",
        title: "finitely many minimal classical 1-absorbing primes, each one below",
        scope: Scope::Module,
        check: tnoetherian,
    },
    Theorem {
        id: "mult_triple",
        title: "multiplication modules: KLNm in P => KLm in P or Nm in P",
        scope: Scope::Module,
        check: mult_triple,
    },
    Theorem {
        id: "mult_welldef",
        title: "submodule product independent of presentations",
        scope: Scope::Module,
        check: mult_welldef,
    },
    Theorem {
        id: "tmain2",
        title: "residual and submodule characterizations",
        scope: Scope::Module,
        check: tmain2,
    },
    Theorem {
        id: "residual_union",
        title: "(P:abcm) = (P:abm) u (P:cm), equal to one side",
        scope: Scope::Module,
        check: residual_union,
    },
    Theorem {
        id: "tmult",
        title: "multiplication modules: 1-absorbing <=> classical 1-absorbing <=> (P:M) 1-absorbing",
        scope: Scope::Module,
        check: tmult,
    },
    Theorem {
        id: "pro9",
        title: "P classical 1-absorbing prime iff M - P is m-closed",
        scope: Scope::Module,
        check: pro9,
    },
    Theorem {
        id: "tkrull",
        title: "maximal submodules disjoint from an m-closed set",
        scope: Scope::Module,
        check: tkrull,
    },
    Theorem {
        id: "tcar",
        title: "binary products: classical 1-absorbing prime <=> shape <=> classical prime",
        scope: Scope::Module,
        check: tcar,
    },
    Theorem {
        id: "tcargen",
        title: "n-fold products: the same equivalence",
        scope: Scope::Module,
        check: tcargen,
    },
    Theorem {
        id: "theoremfin",
        title: "classical 1-absorbing but not classical prime forces a local ring",
        scope: Scope::Module,
        check: theoremfin,
    },
    Theorem {
        id: "lemfin",
        title: "amalgam residuals",
        scope: Scope::Module,
        check: lemfin,
    },
    Theorem {
        id: "lemfin3",
        title: "amalgam units are the componentwise units",
        scope: Scope::AmalgamRing,
        check: lemfin3,
    },
    Theorem {
        id: "tmainnn",
        title: "transfer along amalgamated duplication",
        scope: Scope::Module,
        check: tmainnn,
    },
    Theorem {
        id: "ttensor",
        title: "transfer to free modules A^k (x) M",
        scope: Scope::Tensor,
        check: ttensor,
    },
];

/// Looks up a theorem by id. Case and `-`/`_` are ignored, and a few
/// alternate spellings are accepted.
pub fn theorem(id: &str) -> Result<&'static Theorem> {
    let key = id.trim().to_ascii_lowercase().replace('-', "_");
    let key = match key.as_str() {
        "ttensor_free" => "ttensor",
        "semiprime_equivalence" => "semiprime",
        "multiplication" | "mult" => "mult_triple",
        other => other,
    };
    THEOREMS
        .iter()
        .find(|t| t.id == key)
        .ok_or_else(|| Error::UnknownTheorem(id.to_string()))
}

/// Resolves a selection; empty or `all` means every theorem. Group names
/// `thom` and `cormain` select both parts. Registry order, no duplicates.
pub fn select(ids: &[String]) -> Result<Vec<&'static Theorem>> {
    if ids.is_empty() || ids.iter().any(|s| s.trim().eq_ignore_ascii_case("all")) {
        return Ok(THEOREMS.iter().collect());
    }
    let mut chosen = BTreeSet::new();
    for id in ids {
        let key = id.trim().to_ascii_lowercase();
        match key.as_str() {
            "thom" => {
                chosen.insert("thom_i");
                chosen.insert("thom_ii");
            }
            "cormain" => {
                chosen.insert("cormain_i");
                chosen.insert("cormain_ii");
            }
            _ => {
                chosen.insert(theorem(id)?.id);
            }
        }
    }
    Ok(THEOREMS.iter().filter(|t| chosen.contains(t.id)).collect())
}

// ---------------------------------------------------------------------------
// Shared plumbing

/// A classified module entry, or the verdicts explaining why there is none.
type Checked<'a> = std::result::Result<(&'a ModuleEntry, &'a [Classified]), Vec<Verdict>>;

fn classified<'a>(c: &'a Corpus, id: &str, mi: usize) -> Checked<'a> {
    let e = &c.modules[mi];
    match e.classified(c.caps()) {
        Ok(cl) => Ok((e, cl)),
        Err(reason) => Err(vec![Verdict::skipped(id, e.label.clone(), reason)]),
    }
}

fn sub_instance(e: &ModuleEntry, s: &Submodule) -> String {
    e.instance(&s.short_name())
}

fn against(summary: String, class: Class, cl: &Classified) -> Counterexample {
    match cl.witness(class) {
        Some(w) => Counterexample::against(summary, class, w.clone(), &cl.sub),
        None => Counterexample::summary(summary),
    }
}

/// Per proper submodule: each `(if, then)` pair must hold.
fn implications(c: &Corpus, id: &str, mi: usize, rules: &[(Class, Class)]) -> Vec<Verdict> {
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    cl.iter()
        .map(|x| {
            let cx = rules
                .iter()
                .find(|(a, b)| x.holds(*a) && !x.holds(*b))
                .map(|(a, b)| against(format!("{a} holds but {b} fails for P = {}", x.sub.short_name()), *b, x));
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

fn p1(c: &Corpus, mi: usize) -> Vec<Verdict> {
    implications(c, "p1", mi, &[(Class::Prime, Cp), (Cp, C1ap), (C1ap, C2abs)])
}

fn pro2(c: &Corpus, mi: usize) -> Vec<Verdict> {
    implications(c, "pro2", mi, &[(Class::OneAbsorbingPrime, C1ap)])
}

fn semiprime(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "semiprime";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    cl.iter()
        .map(|x| {
            let (cp, c1, sp) = (x.holds(Cp), x.holds(C1ap), x.holds(Class::Semiprime));
            let cx = if cp && !sp {
                Some(against("classical prime but not semiprime".into(), Class::Semiprime, x))
            } else if cp && !c1 {
                Some(against(
                    "classical prime but not classical 1-absorbing prime".into(),
                    C1ap,
                    x,
                ))
            } else if c1 && sp && !cp {
                Some(against(
                    "classical 1-absorbing prime and semiprime but not classical prime".into(),
                    Cp,
                    x,
                ))
            } else {
                None
            };
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Characterizations

fn oracle_agreement(c: &Corpus, id: &str, mi: usize, forms: &[Characterization]) -> Vec<Verdict> {
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let oracles = match e.oracles(c.caps()) {
        Ok(o) => o,
        Err(reason) => return vec![Verdict::skipped(id, e.label.clone(), reason)],
    };
    cl.iter()
        .zip(oracles)
        .map(|(x, map)| {
            let def = x.holds(C1ap);
            let mut skipped = Vec::new();
            let mut disagree = Vec::new();
            for f in forms {
                match &map[f] {
                    OracleOutcome::Skipped(_) => skipped.push(f.name().to_string()),
                    o => {
                        if o.truth() != Some(def) {
                            disagree.push(f.name());
                        }
                    }
                }
            }
            let cx = (!disagree.is_empty()).then(|| {
                let summary = format!("definition says {def}, {} disagree(s)", disagree.join(", "));
                if def {
                    Counterexample::summary(summary)
                } else {
                    against(summary, C1ap, x)
                }
            });
            Verdict::from_check(id, sub_instance(e, &x.sub), cx).with_skipped_parts(skipped)
        })
        .collect()
}

fn tmain(c: &Corpus, mi: usize) -> Vec<Verdict> {
    use Characterization::*;
    oracle_agreement(
        c,
        "tmain",
        mi,
        &[
            ResidualUnion,
            ElementResidual,
            IdealScalarPair,
            IdealScalarResidual,
            IdealPairScalar,
            IdealPairResidual,
            IdealTriple,
            ElementColon,
        ],
    )
}

fn tmain2(c: &Corpus, mi: usize) -> Vec<Verdict> {
    use Characterization::*;
    oracle_agreement(
        c,
        "tmain2",
        mi,
        &[
            ResidualDichotomy,
            SubmoduleScalars,
            SubmoduleResidual,
            SubmoduleIdealScalarPair,
            SubmoduleIdealScalarResidual,
            SubmoduleIdealPairScalar,
            SubmoduleIdealPairResidual,
            SubmoduleIdealTriple,
            SubmoduleColon,
        ],
    )
}

fn residual_union(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "residual_union";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let m = &e.module;
    let r = m.ring();
    let nu = r.nonunits();
    cl.iter()
        .filter(|x| x.holds(C1ap))
        .map(|x| {
            let rm: Vec<Bits> = (0..m.size())
                .map(|y| x.sub.residual_by_element(y).members().clone())
                .collect();
            let (mut abm, mut cm, mut both) = (0usize, 0usize, 0usize);
            let mut cx = None;
            'sweep: for &a in &nu {
                for &b in &nu {
                    for &cc in &nu {
                        for y in 0..m.size() {
                            let cy = m.act(cc, y);
                            let aby = m.act(a, m.act(b, y));
                            let abcy = m.act(a, m.act(b, cy));
                            let (l, s1, s2) = (&rm[abcy], &rm[aby], &rm[cy]);
                            if *l != s1.union(s2) {
                                cx = Some(Counterexample::summary(format!(
                                    "(P:abcm) is not (P:abm) u (P:cm) at ({},{},{};{})",
                                    r.name(a),
                                    r.name(b),
                                    r.name(cc),
                                    m.name(y)
                                )));
                                break 'sweep;
                            }
                            match (l == s1, l == s2) {
                                (true, true) => both += 1,
                                (true, false) => abm += 1,
                                (false, true) => cm += 1,
                                (false, false) => {
                                    cx = Some(Counterexample::summary(format!(
                                        "(P:abcm) equals neither side at ({},{},{};{})",
                                        r.name(a),
                                        r.name(b),
                                        r.name(cc),
                                        m.name(y)
                                    )));
                                    break 'sweep;
                                }
                            }
                        }
                    }
                }
            }
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
                .with_note(format!("abm side {abm}, cm side {cm}, both {both}"))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Homomorphisms and quotients

fn c1ap_of(e: &ModuleEntry, c: &Corpus, s: &Submodule) -> Option<bool> {
    e.position(c.caps(), s.members())
        .map(|i| e.classified(c.caps()).expect("position implies flags")[i].holds(C1ap))
}

fn cor1(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "cor1";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let qs = match e.quotients(c.caps()) {
        Ok(q) => q,
        Err(reason) => return vec![Verdict::skipped(id, e.label.clone(), reason)],
    };
    cl.iter()
        .map(|x| {
            let def = x.holds(C1ap);
            let mut count = 0;
            let mut cx = None;
            for q in qs.iter().filter(|q| q.kernel.is_subset(&x.sub)) {
                count += 1;
                let img = q.projection.image(&x.sub).expect("submodule of the source");
                let d = q
                    .c1ap(img.members())
                    .expect("proper image lies in the quotient lattice");
                if d.holds() != def {
                    let summary = format!(
                        "P is {} but P/L is {} in M/L for L = {}",
                        verdict_word(def),
                        verdict_word(d.holds()),
                        q.kernel.short_name()
                    );
                    cx = Some(match d.witness() {
                        Some(w) => Counterexample::against(summary, C1ap, w.clone(), &img),
                        None => against(summary, C1ap, x),
                    });
                    break;
                }
            }
            Verdict::from_check(id, sub_instance(e, &x.sub), cx).with_note(format!("{count} quotients"))
        })
        .collect()
}

fn verdict_word(b: bool) -> &'static str {
    if b {
        "classical 1-absorbing prime"
    } else {
        "not classical 1-absorbing prime"
    }
}

/// Scalar maps `m ↦ rm`, one per distinct map, with their names.
fn scalar_maps(m: &Arc<FiniteModule>) -> Vec<(String, ModuleHom)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in 0..m.ring().size() {
        let map: Vec<usize> = (0..m.size()).map(|x| m.act(r, x)).collect();
        if seen.insert(map.clone()) {
            let h = ModuleHom::new(Arc::clone(m), Arc::clone(m), map).expect("scalar maps are linear");
            out.push((format!("{}·", m.ring().name(r)), h));
        }
    }
    out
}

fn thom_i(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "thom_i";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let mut out = Vec::new();
    // Checks every classical 1-absorbing prime of the target.
    let check = |name: String, f: &ModuleHom, targets: Vec<&Submodule>| -> Verdict {
        let mut cx = None;
        for p2 in &targets {
            let q = f.preimage(p2).expect("submodule of the target");
            if !q.is_proper() {
                continue;
            }
            match c1ap_of(e, c, &q) {
                Some(true) => {}
                Some(false) => {
                    let qi = e.position(c.caps(), q.members()).expect("looked up above");
                    cx = Some(against(
                        format!(
                            "preimage of {} is proper and not classical 1-absorbing prime",
                            p2.short_name()
                        ),
                        C1ap,
                        &e.classified(c.caps()).expect("cached")[qi],
                    ));
                    break;
                }
                None => {
                    cx = Some(Counterexample::summary(format!(
                        "preimage of {} is not in the submodule lattice",
                        p2.short_name()
                    )));
                    break;
                }
            }
        }
        Verdict::from_check(id, e.instance(&name), cx).with_note(format!("{} targets", targets.len()))
    };
    match e.quotients(c.caps()) {
        Ok(qs) => {
            for q in qs {
                let targets: Vec<&Submodule> = q
                    .lattice
                    .iter()
                    .filter(|(_, d)| d.as_ref().is_some_and(|d| d.holds()))
                    .map(|(s, _)| s)
                    .collect();
                out.push(check(format!("π:{}", q.kernel.short_name()), &q.projection, targets));
            }
        }
        Err(reason) => out.push(Verdict::skipped(id, e.instance("projections"), reason)),
    }
    let own: Vec<&Submodule> = cl.iter().filter(|x| x.holds(C1ap)).map(|x| &x.sub).collect();
    for (name, f) in scalar_maps(&e.module) {
        out.push(check(name, &f, own.clone()));
    }
    let n = e.module.size();
    if n * n <= c.caps().max_injection_target {
        match injection(&e.module) {
            Ok((f, targets)) => {
                let t: Vec<&Submodule> = targets.iter().collect();
                out.push(check("ι:M→M⊕M".into(), &f, t));
            }
            Err(err) => out.push(Verdict::skipped(id, e.instance("ι:M→M⊕M"), err.to_string())),
        }
    }
    out
}

/// `x ↦ (x, 0)` into `M ⊕ M`, with the classical 1-absorbing primes of `M ⊕ M`.
fn injection(m: &Arc<FiniteModule>) -> Result<(ModuleHom, Vec<Submodule>)> {
    let target = Arc::new(direct_sum(&[m, m])?);
    let n = m.size();
    let map = (0..n).map(|x| x * n + m.zero()).collect();
    let f = ModuleHom::new(Arc::clone(m), Arc::clone(&target), map)?;
    let mut c1 = Vec::new();
    for s in target.all_submodules()? {
        if s.is_proper() && Class::ClassicalOneAbsorbingPrime.decide(&s)?.holds() {
            c1.push(s);
        }
    }
    Ok((f, c1))
}

fn thom_ii(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "thom_ii";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let mut out = Vec::new();
    let sources: Vec<&Classified> = cl.iter().filter(|x| x.holds(C1ap)).collect();
    match e.quotients(c.caps()) {
        Ok(qs) => {
            for q in qs {
                let mut count = 0;
                let mut cx = None;
                for x in sources.iter().filter(|x| q.kernel.is_subset(&x.sub)) {
                    count += 1;
                    let img = q.projection.image(&x.sub).expect("submodule of the source");
                    match q.c1ap(img.members()) {
                        Some(d) if d.holds() => {}
                        Some(d) => {
                            let w = d.witness().expect("failing decision has a witness").clone();
                            cx = Some(Counterexample::against(
                                format!("image of {} is not classical 1-absorbing prime", x.sub.short_name()),
                                C1ap,
                                w,
                                &img,
                            ));
                            break;
                        }
                        None => {
                            cx = Some(Counterexample::summary(format!(
                                "image of {} is the whole quotient",
                                x.sub.short_name()
                            )));
                            break;
                        }
                    }
                }
                out.push(
                    Verdict::from_check(id, e.instance(&format!("π:{}", q.kernel.short_name())), cx)
                        .with_note(format!("{count} sources")),
                );
            }
        }
        Err(reason) => out.push(Verdict::skipped(id, e.instance("projections"), reason)),
    }
    for (name, f) in scalar_maps(&e.module) {
        if !f.is_surjective() {
            continue;
        }
        let mut cx = None;
        for x in &sources {
            let img = f.image(&x.sub).expect("submodule of the source");
            match c1ap_of(e, c, &img) {
                Some(true) => {}
                _ => {
                    cx = Some(Counterexample::summary(format!(
                        "image of {} under {name} is not classical 1-absorbing prime",
                        x.sub.short_name()
                    )));
                    break;
                }
            }
        }
        out.push(Verdict::from_check(id, e.instance(&name), cx).with_note(format!("{} sources", sources.len())));
    }
    out
}

// ---------------------------------------------------------------------------
// Ideals of A, the local-ring dichotomy, chains and minimal elements

fn cormain_i(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "cormain_i";
    if c.modules[mi].recipe != super::corpus::Recipe::RingAsModule {
        return Vec::new();
    }
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let ring = e.module.ring();
    cl.iter()
        .map(|x| {
            let ideal = Ideal::from_bits(ring, x.sub.members().clone()).expect("submodules of A are ideals");
            let ideal_side = ideal.is_one_absorbing_prime().expect("proper ideal");
            let cx = (ideal_side.holds() != x.holds(C1ap)).then(|| {
                if x.holds(C1ap) {
                    Counterexample::summary(format!(
                        "classical 1-absorbing prime but not a 1-absorbing prime ideal, witness {:?}",
                        ideal_side.witness()
                    ))
                } else {
                    against(
                        "1-absorbing prime ideal but not classical 1-absorbing prime".into(),
                        C1ap,
                        x,
                    )
                }
            });
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

/// The universal statement "every proper submodule of every recipe module is
/// classical 1-absorbing prime" over one ring, and the local-ring prediction.
#[derive(Debug, Clone)]
pub struct CormainOutcome {
    pub ring: String,
    /// `None` when no failure was found but some module was skipped.
    pub statement: Option<bool>,
    /// First failure: instance label and the re-checkable witness.
    pub witness: Option<(String, Counterexample)>,
    /// `A` is local with `𝔪² = 0`.
    pub prediction: bool,
    pub modules_checked: usize,
    pub modules_skipped: Vec<String>,
}

pub fn cormain_statement(c: &Corpus, ri: usize) -> CormainOutcome {
    let ring = &c.rings[ri].ring;
    let prediction = match ring.local_maximal() {
        Ok(Some(m)) => m.product(&m).map(|sq| sq.len() == 1).unwrap_or(false),
        _ => false,
    };
    let mut out = CormainOutcome {
        ring: c.rings[ri].label.clone(),
        statement: None,
        witness: None,
        prediction,
        modules_checked: 0,
        modules_skipped: Vec::new(),
    };
    for mi in c.modules_over(ri) {
        let e = &c.modules[mi];
        match e.classified(c.caps()) {
            Ok(cl) => {
                out.modules_checked += 1;
                if let Some(x) = cl.iter().find(|x| !x.holds(C1ap)) {
                    let cx = against(
                        format!("P = {} is not classical 1-absorbing prime", x.sub.short_name()),
                        C1ap,
                        x,
                    );
                    out.statement = Some(false);
                    out.witness = Some((sub_instance(e, &x.sub), cx));
                    return out;
                }
            }
            Err(_) => out.modules_skipped.push(e.label.clone()),
        }
    }
    if out.modules_skipped.is_empty() {
        out.statement = Some(true);
    }
    out
}

fn cormain_ii(c: &Corpus, ri: usize) -> Vec<Verdict> {
    let id = "cormain_ii";
    let o = cormain_statement(c, ri);
    let label = o.ring.clone();
    if o.modules_checked == 0 {
        return vec![Verdict::skipped(id, label, "no recipe module under the caps")];
    }
    let Some(statement) = o.statement else {
        return vec![Verdict::skipped(
            id,
            label,
            format!("no failure found but {} module(s) skipped", o.modules_skipped.len()),
        )];
    };
    let mut note = format!(
        "statement {statement}, local with m^2 = 0: {}, {} modules",
        o.prediction, o.modules_checked
    );
    if let Some((inst, cx)) = &o.witness {
        note.push_str(&format!(
            ", witness at {inst}: {}",
            cx.rendered.as_deref().unwrap_or(&cx.summary)
        ));
    }
    let cx = (statement != o.prediction).then(|| match &o.witness {
        Some((_, w)) => Counterexample {
            summary: format!("statement is {statement} but the prediction is {}", o.prediction),
            ..w.clone()
        },
        None => Counterexample::summary(
            "every proper submodule is classical 1-absorbing prime, but the ring is not local with m^2 = 0",
        ),
    });
    vec![Verdict::from_check(id, label, cx).with_note(note)]
}

fn pro4(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "pro4";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let good: Vec<&Submodule> = cl.iter().filter(|x| x.holds(C1ap)).map(|x| &x.sub).collect();
    let n = good.len();
    // below[i]: elements covered by i within the poset.
    let strictly = |a: usize, b: usize| a != b && good[a].is_subset(good[b]);
    let below: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| strictly(j, i) && !(0..n).any(|k| strictly(j, k) && strictly(k, i)))
                .collect()
        })
        .collect();
    let tops: Vec<usize> = (0..n).filter(|&i| !(0..n).any(|j| strictly(i, j))).collect();
    let mut chains = 0usize;
    let mut cx = None;
    let mut stack: Vec<Vec<usize>> = tops.iter().map(|&t| vec![t]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        if !below[last].is_empty() {
            for &j in below[last].iter().rev() {
                let mut next = chain.clone();
                next.push(j);
                stack.push(next);
            }
            continue;
        }
        chains += 1;
        if chains > c.caps().max_chains {
            return vec![Verdict::skipped(
                id,
                e.label.clone(),
                format!("more than {} maximal chains", c.caps().max_chains),
            )];
        }
        let mut meet = good[chain[0]].members().clone();
        for &k in &chain[1..] {
            meet.intersect_with(good[k].members());
        }
        match e.position(c.caps(), &meet) {
            Some(p) if cl[p].holds(C1ap) => {}
            Some(p) => {
                cx = Some(against(
                    "intersection of a chain is not classical 1-absorbing prime".into(),
                    C1ap,
                    &cl[p],
                ));
                break;
            }
            None => {
                cx = Some(Counterexample::summary(
                    "intersection of a chain is not a proper submodule",
                ));
                break;
            }
        }
    }
    vec![Verdict::from_check(id, e.label.clone(), cx).with_note(format!("{chains} maximal chains over {n} members"))]
}

fn tnoetherian(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "tnoetherian";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let good: Vec<&Submodule> = cl.iter().filter(|x| x.holds(C1ap)).map(|x| &x.sub).collect();
    let minimal: Vec<&Submodule> = good
        .iter()
        .filter(|p| !good.iter().any(|k| k != *p && k.is_subset(p)))
        .copied()
        .collect();
    let mut cx = good
        .iter()
        .find(|p| !minimal.iter().any(|k| k.is_subset(p)))
        .map(|p| Counterexample::summary(format!("{} contains no minimal member", p.short_name())));
    if cx.is_none() {
        match minimal_classical_1abs_primes(&e.module) {
            Ok(lib) => {
                let a: BTreeSet<&Bits> = lib.iter().map(|s| s.members()).collect();
                let b: BTreeSet<&Bits> = minimal.iter().map(|s| s.members()).collect();
                if a != b {
                    cx = Some(Counterexample::summary("library minimal set differs from the sweep"));
                }
            }
            Err(err) => return vec![Verdict::skipped(id, e.label.clone(), err.to_string())],
        }
    }
    let names: Vec<String> = minimal.iter().map(|s| s.short_name()).collect();
    vec![Verdict::from_check(id, e.label.clone(), cx).with_note(format!("minimal: [{}]", names.join(", ")))]
}

// ---------------------------------------------------------------------------
// Multiplication modules

fn multiplication<'a>(c: &'a Corpus, id: &str, mi: usize) -> Option<Checked<'a>> {
    let e = &c.modules[mi];
    let lattice = match e.lattice(c.caps()) {
        Ok(l) => l,
        Err(reason) => return Some(Err(vec![Verdict::skipped(id, e.label.clone(), reason)])),
    };
    let whole = e.module.whole();
    let is_mult = lattice.iter().all(|n| {
        n.residual_by_submodule(&whole)
            .times(&whole)
            .map(|x| x.members() == n.members())
            .unwrap_or(false)
    });
    is_mult.then(|| classified(c, id, mi))
}

fn mult_triple(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "mult_triple";
    let (e, cl) = match multiplication(c, id, mi) {
        None => return Vec::new(),
        Some(Err(v)) => return v,
        Some(Ok(x)) => x,
    };
    let m = &e.module;
    let whole = m.whole();
    let r = m.ring();
    // Distinct X_K = (K :_A M) for proper K.
    let mut xs: Vec<Ideal> = cl.iter().map(|x| x.sub.residual_by_submodule(&whole)).collect();
    xs.sort_by(|a, b| a.members().cmp(b.members()));
    xs.dedup();
    let nx = xs.len();
    let mut pair = vec![None; nx * nx];
    let mut triple = vec![None; nx * nx * nx];
    for i in 0..nx {
        for j in 0..nx {
            let ij = xs[i].product(&xs[j]).expect("same ring");
            for k in 0..nx {
                triple[(i * nx + j) * nx + k] = Some(ij.product(&xs[k]).expect("same ring").members().clone());
            }
            pair[i * nx + j] = Some(ij.members().clone());
        }
    }
    cl.iter()
        .map(|x| {
            let mut cond = true;
            'outer: for y in 0..m.size() {
                let rm = x.sub.residual_by_element(y);
                let rm = rm.members();
                for i in 0..nx {
                    for j in 0..nx {
                        let ij = pair[i * nx + j].as_ref().expect("filled");
                        for k in 0..nx {
                            let ijk = triple[(i * nx + j) * nx + k].as_ref().expect("filled");
                            if ijk.is_subset(rm) && !ij.is_subset(rm) && !xs[k].members().is_subset(rm) {
                                cond = false;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            let def = x.holds(C1ap);
            let cx = (cond != def).then(|| {
                let s = format!("triple-product condition is {cond}, definition is {def}");
                if def {
                    Counterexample::summary(s)
                } else {
                    against(s, C1ap, x)
                }
            });
            let _ = r;
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

fn mult_welldef(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "mult_welldef";
    let (e, _) = match multiplication(c, id, mi) {
        None => return Vec::new(),
        Some(Err(v)) => return v,
        Some(Ok(x)) => x,
    };
    let lattice = e.lattice(c.caps()).expect("checked by multiplication()");
    let whole = e.module.whole();
    let ideals = match e.module.ring().ideals() {
        Ok(i) => i,
        Err(err) => return vec![Verdict::skipped(id, e.label.clone(), err.to_string())],
    };
    let im: Vec<Bits> = ideals
        .iter()
        .map(|i| i.times(&whole).expect("same ring").members().clone())
        .collect();
    let mut presentations: HashMap<&Bits, Vec<usize>> = HashMap::new();
    for (k, b) in im.iter().enumerate() {
        presentations.entry(b).or_default().push(k);
    }
    let mut pairs = 0usize;
    let mut cx = None;
    'outer: for n in lattice {
        for k in lattice {
            let reference = crate::module::submodule_product(n, k).expect("multiplication module");
            for &i in &presentations[n.members()] {
                for &j in &presentations[k.members()] {
                    pairs += 1;
                    let ij = ideals[i].product(&ideals[j]).expect("same ring");
                    let got = ij.times(&whole).expect("same ring");
                    if got.members() != reference.members() {
                        cx = Some(Counterexample::summary(format!(
                            "N = {}, K = {}: presentations {} and {} give {} instead of {}",
                            n.short_name(),
                            k.short_name(),
                            ideals[i].short_name(),
                            ideals[j].short_name(),
                            got.short_name(),
                            reference.short_name()
                        )));
                        break 'outer;
                    }
                }
            }
        }
    }
    vec![Verdict::from_check(id, e.label.clone(), cx).with_note(format!("{pairs} presentation pairs"))]
}

fn tmult(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "tmult";
    let (e, cl) = match multiplication(c, id, mi) {
        None => return Vec::new(),
        Some(Err(v)) => return v,
        Some(Ok(x)) => x,
    };
    let whole = e.module.whole();
    cl.iter()
        .map(|x| {
            let a = x.holds(Class::OneAbsorbingPrime);
            let b = x.holds(C1ap);
            let colon = x.sub.residual_by_submodule(&whole);
            let ci = colon.is_one_absorbing_prime().map(|d| d.holds()).unwrap_or(false);
            let cx = !(a == b && b == ci).then_some(()).is_some();
            let cx = cx.then(|| {
                let s = format!("1abs_prime {a}, classical_1abs_prime {b}, (P:M) 1-absorbing {ci}");
                if !b {
                    against(s, C1ap, x)
                } else if !a {
                    against(s, Class::OneAbsorbingPrime, x)
                } else {
                    Counterexample::summary(s)
                }
            });
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// m-closed sets

fn mclosed_scope<'a>(c: &'a Corpus, id: &str, mi: usize) -> Checked<'a> {
    let e = &c.modules[mi];
    let caps = c.caps();
    if e.module.size() > caps.mclosed_module {
        return Err(vec![Verdict::skipped(
            id,
            e.label.clone(),
            format!(
                "module size {} exceeds mclosed_module {}",
                e.module.size(),
                caps.mclosed_module
            ),
        )]);
    }
    let ideals = e.module.ring().ideals().map(|i| i.len()).unwrap_or(usize::MAX);
    if ideals > caps.mclosed_ideals {
        return Err(vec![Verdict::skipped(
            id,
            e.label.clone(),
            format!("{ideals} ideals exceed mclosed_ideals {}", caps.mclosed_ideals),
        )]);
    }
    classified(c, id, mi)
}

fn pro9(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "pro9";
    let (e, cl) = match mclosed_scope(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    cl.iter()
        .map(|x| {
            let s = x.sub.members().complement();
            match is_c1ap_m_closed(&e.module, &s) {
                Ok(d) => {
                    let def = x.holds(C1ap);
                    let cx = (d.holds() != def).then(|| {
                        let summary = match d.witness() {
                            Some(w) => format!("M - P is not m-closed ({w}) but P is classical 1-absorbing prime"),
                            None => "M - P is m-closed but P is not classical 1-absorbing prime".to_string(),
                        };
                        if def {
                            Counterexample::summary(summary)
                        } else {
                            against(summary, C1ap, x)
                        }
                    });
                    Verdict::from_check(id, sub_instance(e, &x.sub), cx)
                }
                Err(err) => Verdict::skipped(id, sub_instance(e, &x.sub), err.to_string()),
            }
        })
        .collect()
}

/// Candidate sets `S ⊆ M ∖ {0}`, nonempty, deduplicated.
fn krull_sets(e: &ModuleEntry, lattice: &[Submodule], exhaustive_up_to: usize) -> Vec<Bits> {
    let n = e.module.size();
    let zero = e.module.zero();
    let mut out = BTreeSet::new();
    if n <= exhaustive_up_to {
        let others: Vec<usize> = (0..n).filter(|&x| x != zero).collect();
        for mask in 1u64..(1u64 << others.len()) {
            out.insert(Bits::from_indices(
                n,
                others
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x),
            ));
        }
    } else {
        let proper: Vec<&Submodule> = lattice.iter().filter(|s| s.is_proper()).collect();
        for (i, a) in proper.iter().enumerate() {
            out.insert(a.members().complement());
            for b in &proper[i + 1..] {
                let s = a.members().union(b.members()).complement();
                if !s.is_empty() {
                    out.insert(s);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn tkrull(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "tkrull";
    let (e, cl) = match mclosed_scope(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let lattice = e.lattice(c.caps()).expect("classified implies lattice");
    let sets = krull_sets(e, lattice, c.caps().krull_exhaustive_up_to);
    let mut closed = 0usize;
    let mut cx = None;
    'sets: for s in &sets {
        let d = match is_c1ap_m_closed(&e.module, s) {
            Ok(d) => d,
            Err(err) => return vec![Verdict::skipped(id, e.label.clone(), err.to_string())],
        };
        if !d.holds() {
            continue;
        }
        closed += 1;
        let maxes = match maximal_disjoint_submodules(&e.module, s) {
            Ok(m) => m,
            Err(err) => return vec![Verdict::skipped(id, e.label.clone(), err.to_string())],
        };
        if maxes.is_empty() {
            cx = Some(Counterexample::summary(format!(
                "no submodule is disjoint from S = {:?}",
                s
            )));
            break;
        }
        for p in maxes {
            let Some(i) = e.position(c.caps(), p.members()) else {
                cx = Some(Counterexample::summary(format!(
                    "maximal disjoint submodule {} is not proper",
                    p.short_name()
                )));
                break 'sets;
            };
            if !cl[i].holds(C1ap) {
                cx = Some(against(
                    format!(
                        "maximal submodule disjoint from S = {:?} is not classical 1-absorbing prime",
                        s
                    ),
                    C1ap,
                    &cl[i],
                ));
                break 'sets;
            }
        }
    }
    vec![Verdict::from_check(id, e.label.clone(), cx).with_note(format!("{} sets, {closed} m-closed", sets.len()))]
}

// ---------------------------------------------------------------------------
// Products

fn component_flag(p: &Submodule, class: Class) -> Option<bool> {
    if !p.is_proper() {
        return None;
    }
    Some(class.decide(p).map(|d| d.holds()).unwrap_or(false))
}

fn product_check(c: &Corpus, id: &str, mi: usize, binary_only: bool) -> Vec<Verdict> {
    let e = &c.modules[mi];
    let Structure::Product(pm) = &e.structure else {
        return Vec::new();
    };
    if binary_only && pm.factors().len() != 2 {
        return Vec::new();
    }
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    cl.iter()
        .map(|x| {
            let comps = pm.components(&x.sub).expect("submodule of the product");
            let rebuilt = pm.submodule(&comps).expect("one component per factor");
            if rebuilt.members() != x.sub.members() {
                return Verdict::fails(
                    id,
                    sub_instance(e, &x.sub),
                    Counterexample::summary("P is not the product of its components"),
                );
            }
            let whole: Vec<bool> = comps.iter().map(|p| !p.is_proper()).collect();
            let shape = |class: Class| {
                (0..comps.len()).any(|k| {
                    component_flag(&comps[k], class) == Some(true) && (0..comps.len()).all(|t| t == k || whole[t])
                })
            };
            let i = x.holds(C1ap);
            let iii = x.holds(Cp);
            let (ii, lem) = if binary_only {
                // P_1 = M_1 and P_2 classical prime, or the other way round.
                let s = shape(Cp);
                (s, s)
            } else {
                (shape(C1ap), shape(Cp))
            };
            let ok = i == ii && ii == iii && lem == iii;
            let names: Vec<String> = comps.iter().map(|p| p.short_name()).collect();
            let cx = (!ok).then(|| {
                let s = format!(
                    "components [{}]: (i) {i}, (ii) {ii}, (iii) {iii}, classical prime shape {lem}",
                    names.join(", ")
                );
                if !i {
                    against(s, C1ap, x)
                } else if !iii {
                    against(s, Cp, x)
                } else {
                    Counterexample::summary(s)
                }
            });
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

fn tcar(c: &Corpus, mi: usize) -> Vec<Verdict> {
    product_check(c, "tcar", mi, true)
}

fn tcargen(c: &Corpus, mi: usize) -> Vec<Verdict> {
    product_check(c, "tcargen", mi, false)
}

fn theoremfin(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "theoremfin";
    let (e, cl) = match classified(c, id, mi) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let ring = e.module.ring();
    let local = ring.local_maximal().ok().flatten();
    cl.iter()
        .filter(|x| x.holds(C1ap) && !x.holds(Cp))
        .map(|x| {
            let cx = match &local {
                None => Some(against(
                    "classical 1-absorbing prime, not classical prime, over a non-local ring".into(),
                    Cp,
                    x,
                )),
                Some(q) => {
                    let q2 = q.product(q).expect("same ring");
                    let found = (0..e.module.size())
                        .filter(|&m| !x.sub.contains(m))
                        .any(|m| q2.members().is_subset(x.sub.residual_by_element(m).members()));
                    (!found).then(|| Counterexample::summary("no m outside P with q^2 inside (P:m)"))
                }
            };
            Verdict::from_check(id, sub_instance(e, &x.sub), cx)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Amalgamated duplication

fn lemfin(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "lemfin";
    let e = &c.modules[mi];
    let Structure::Amalgam { base, amalgam } = &e.structure else {
        return Vec::new();
    };
    let b = &c.modules[*base];
    let lattice = match b.lattice(c.caps()) {
        Ok(l) => l,
        Err(reason) => return vec![Verdict::skipped(id, e.label.clone(), reason)],
    };
    let am = amalgam;
    let base_m = am.base();
    let ideal = am.ideal().elements();
    let im = am.im().members().to_vec();
    let a = base_m.ring().size();
    lattice
        .iter()
        .map(|p| {
            let inst = e.instance(&p.short_name());
            let lifted = am.submodule(p).expect("submodule of the base");
            if am.module().size() != base_m.size() * im.len() || lifted.len() != p.len() * im.len() {
                return Verdict::fails(id, inst, Counterexample::summary("cardinality of M⋈I or P⋈I is off"));
            }
            let mut scalar = 0usize;
            let mut cx = None;
            'scalar: for x in 0..a {
                for &i in &ideal {
                    if am.residual_by_scalar_agrees(p, x, i).expect("valid indices") {
                        scalar += 1;
                    } else {
                        cx = Some(Counterexample::summary(format!(
                            "(P⋈I : (a,a+i)) differs from (P:a)⋈I at a = {}, i = {}",
                            base_m.ring().name(x),
                            base_m.ring().name(i)
                        )));
                        break 'scalar;
                    }
                }
            }
            let mut element = 0usize;
            if cx.is_none() {
                'element: for m in 0..base_m.size() {
                    for &mp in &im {
                        if am.residual_by_element_agrees(p, m, mp).expect("valid indices") {
                            element += 1;
                        } else {
                            cx = Some(Counterexample::summary(format!(
                                "(P⋈I : (m,m+m')) differs from (P:m)⋈I at m = {}, m' = {}",
                                base_m.name(m),
                                base_m.name(mp)
                            )));
                            break 'element;
                        }
                    }
                }
            }
            Verdict::from_check(id, inst, cx).with_note(format!(
                "(a,i): {scalar}/{} equal, (m,m'): {element}/{} equal",
                a * ideal.len(),
                base_m.size() * im.len()
            ))
        })
        .collect()
}

fn lemfin3(c: &Corpus, ri: usize) -> Vec<Verdict> {
    let id = "lemfin3";
    let entry = &c.rings[ri];
    let RingKind::Amalgam(am) = &entry.kind else {
        return Vec::new();
    };
    let r = am.ring();
    let n = r.size();
    let inverse_search = Bits::from_indices(n, (0..n).filter(|&x| (0..n).any(|y| r.mul(x, y) == r.one())));
    let predicted = am.componentwise_units();
    let cx = if n != am.base().size() * am.ideal().len() {
        Some(Counterexample::summary("|A⋈I| is not |A|·|I|"))
    } else if inverse_search != predicted {
        let x = inverse_search
            .iter()
            .chain(predicted.iter())
            .find(|&x| inverse_search.contains(x) != predicted.contains(x))
            .expect("sets differ");
        Some(Counterexample::summary(format!(
            "{} is a unit by inverse search: {}, componentwise: {}",
            r.name(x),
            inverse_search.contains(x),
            predicted.contains(x)
        )))
    } else if &inverse_search != r.unit_mask() {
        Some(Counterexample::summary("unit mask differs from inverse search"))
    } else {
        None
    };
    vec![Verdict::from_check(id, entry.label.clone(), cx).with_note(format!("{} units of {n}", predicted.count()))]
}

fn tmainnn(c: &Corpus, mi: usize) -> Vec<Verdict> {
    let id = "tmainnn";
    let e = &c.modules[mi];
    let Structure::Amalgam { base, amalgam } = &e.structure else {
        return Vec::new();
    };
    let (b, bcl) = match classified(c, id, *base) {
        Ok(x) => x,
        Err(v) => return v,
    };
    let _ = b;
    let acl = match e.classified(c.caps()) {
        Ok(x) => x,
        Err(reason) => return vec![Verdict::skipped(id, e.label.clone(), reason)],
    };
    bcl.iter()
        .map(|x| {
            let inst = e.instance(&x.sub.short_name());
            let lifted = amalgam.submodule(&x.sub).expect("submodule of the base");
            let Some(j) = e.position(c.caps(), lifted.members()) else {
                return Verdict::fails(id, inst, Counterexample::summary("P⋈I is not a proper submodule"));
            };
            let y = &acl[j];
            let cx = [Cp, C1ap, C2abs]
                .into_iter()
                .find(|&k| x.holds(k) != y.holds(k))
                .map(|k| {
                    let s = format!("{k}: P {} but P⋈I {}", x.holds(k), y.holds(k));
                    if !x.holds(k) {
                        against(s, k, x)
                    } else {
                        against(s, k, y)
                    }
                });
            Verdict::from_check(id, inst, cx)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Free modules

fn ttensor(c: &Corpus, ti: usize) -> Vec<Verdict> {
    let id = "ttensor";
    let t = &c.tensors[ti];
    let (e, cl) = match classified(c, id, t.base) {
        Ok(x) => x,
        Err(_) => return vec![Verdict::skipped(id, t.label.clone(), "base lattice not available")],
    };
    let size = (e.module.size() as u64).pow(t.rank as u32);
    let work = (cl.len() as u64)
        .saturating_mul(c1ap_sweep_factor(e.module.ring()))
        .saturating_mul(size);
    if work > c.caps().sweep_work {
        return vec![Verdict::skipped(
            id,
            t.label.clone(),
            format!("tensor sweep work {work} exceeds sweep_work {}", c.caps().sweep_work),
        )];
    }
    let ft = match FreeTensor::with_cap(&e.module, t.rank, c.caps().max_tensor_module) {
        Ok(f) => f,
        Err(err) => return vec![Verdict::skipped(id, t.label.clone(), err.to_string())],
    };
    cl.iter()
        .map(|x| {
            let pk = ft.submodule(&x.sub).expect("submodule of the base");
            let inst = format!("{} | {}", t.label, x.sub.short_name());
            match Class::ClassicalOneAbsorbingPrime.decide(&pk) {
                Ok(d) => {
                    let cx = (d.holds() != x.holds(C1ap)).then(|| match d.witness() {
                        Some(w) => Counterexample::against(
                            format!("P is classical 1-absorbing prime but P^{} is not", t.rank),
                            C1ap,
                            w.clone(),
                            &pk,
                        ),
                        None => against(
                            format!("P^{} is classical 1-absorbing prime but P is not", t.rank),
                            C1ap,
                            x,
                        ),
                    });
                    Verdict::from_check(id, inst, cx)
                }
                Err(err) => Verdict::skipped(id, inst, err.to_string()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::AmalgamModule;
    use crate::lab::corpus::{AmalgamSpec, CorpusConfig};
    use crate::ring::FiniteRing;

    fn corpus(zmods: &[usize]) -> Corpus {
        let mut c = CorpusConfig::empty();
        c.zmods = zmods.to_vec();
        Corpus::generate(&c).unwrap()
    }

    fn run(c: &Corpus, id: &str) -> Vec<Verdict> {
        let t = theorem(id).unwrap();
        t.targets(c).into_iter().flat_map(|x| t.check(c, x).unwrap()).collect()
    }

    #[test]
    fn registry_lookup() {
        let ids: BTreeSet<&str> = THEOREMS.iter().map(|t| t.id).collect();
        assert_eq!(ids.len(), THEOREMS.len());
        assert_eq!(theorem("tNoetherian").unwrap().id, "tnoetherian");
        assert_eq!(theorem("ttensor-free").unwrap().id, "ttensor");
        assert_eq!(theorem("semiprime-equivalence").unwrap().id, "semiprime");
        assert!(matches!(theorem("bogus"), Err(Error::UnknownTheorem(_))));
        let both: Vec<&str> = select(&["thom".into()]).unwrap().iter().map(|t| t.id).collect();
        assert_eq!(both, ["thom_i", "thom_ii"]);
        assert_eq!(select(&[]).unwrap().len(), THEOREMS.len());
        assert_eq!(select(&["all".into(), "p1".into()]).unwrap().len(), THEOREMS.len());
    }

    #[test]
    fn wrong_target_is_rejected() {
        let c = corpus(&[4]);
        assert!(theorem("p1").unwrap().check(&c, Target::Ring(0)).is_err());
        assert!(theorem("p1").unwrap().check(&c, Target::Module(99)).is_err());
    }

    #[test]
    fn module_level_checks_hold_on_small_rings() {
        let c = corpus(&[2, 4, 6, 8, 9]);
        for id in [
            "p1",
            "pro2",
            "semiprime",
            "thom_i",
            "thom_ii",
            "cor1",
            "tmain",
            "tmain2",
            "cormain_i",
            "pro4",
            "tnoetherian",
            "mult_welldef",
            "residual_union",
            "tmult",
            "pro9",
            "tkrull",
            "theoremfin",
        ] {
            let vs = run(&c, id);
            assert!(!vs.is_empty(), "{id}");
            assert!(
                vs.iter().all(|v| !v.is_failure()),
                "{id}: {:?}",
                vs.iter().find(|v| v.is_failure())
            );
        }
    }

    #[test]
    fn cormain_dichotomy() {
        let c = corpus(&[4, 6, 8]);
        let z4 = cormain_statement(&c, c.find_ring("Z4").unwrap());
        assert_eq!((z4.statement, z4.prediction), (Some(true), true));
        let z6 = cormain_statement(&c, c.find_ring("Z6").unwrap());
        assert_eq!((z6.statement, z6.prediction), (Some(false), false));
        let z8 = cormain_statement(&c, c.find_ring("Z8").unwrap());
        assert_eq!((z8.statement, z8.prediction), (Some(false), false));
        let (inst, cx) = z8.witness.unwrap();
        assert_eq!(inst, "Z8 | Z8 | 0");
        assert_eq!(cx.rendered.as_deref(), Some("(2,2,2;1)"));
        assert_eq!(cx.revalidates(), Some(true));
        assert!(run(&c, "cormain_ii").iter().all(Verdict::is_holds));
    }

    #[test]
    fn literal_shape_with_c1ap_component_is_too_weak() {
        let mut cfg = CorpusConfig::empty();
        cfg.products = vec![[4, 4]];
        let c = Corpus::generate(&cfg).unwrap();
        assert!(run(&c, "tcar").iter().all(|v| !v.is_failure()));
        let failures: Vec<Verdict> = run(&c, "tcargen").into_iter().filter(Verdict::is_failure).collect();
        assert!(failures.iter().any(|v| v.instance == "Z4xZ4 | Z4×Z4 | <(1,0)>"));
        for v in &failures {
            assert_eq!(v.counterexample().unwrap().revalidates(), Some(true));
        }
    }

    #[test]
    fn triple_product_condition_misses_ideals_with_im_equal_m() {
        let c = corpus(&[12]);
        let failures: Vec<Verdict> = run(&c, "mult_triple").into_iter().filter(Verdict::is_failure).collect();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].instance, "Z12 | Z12/<4> | 0");
        let cx = failures[0].counterexample().unwrap();
        assert_eq!(cx.rendered.as_deref(), Some("(2,3,2;1)"));
        assert_eq!(cx.revalidates(), Some(true));
    }

    #[test]
    fn amalgam_checks_hold() {
        let mut cfg = CorpusConfig::empty();
        cfg.zmods = vec![4, 8];
        cfg.amalgams = vec![AmalgamSpec { n: 4, gen: 2 }, AmalgamSpec { n: 8, gen: 4 }];
        let c = Corpus::generate(&cfg).unwrap();
        for id in ["lemfin", "lemfin3", "tmainnn"] {
            let vs = run(&c, id);
            assert!(!vs.is_empty(), "{id}");
            assert!(vs.iter().all(Verdict::is_holds), "{id}");
        }
        let lemfin = run(&c, "lemfin");
        assert!(lemfin
            .iter()
            .filter_map(|v| v.note.as_deref())
            .any(|n| n.starts_with("(a,i): 8/8 equal")));
    }

    #[test]
    fn duplication_along_whole_ring_breaks_transfer() {
        let r = Arc::new(FiniteRing::zmod(4).unwrap());
        let m = Arc::new(FiniteModule::ring_as_module(&r));
        let am = AmalgamModule::new(&m, &r.whole()).unwrap();
        let p = m.zero_submodule();
        assert!(C1ap.decide(&p).unwrap().holds());
        let lifted = C1ap.decide(&am.submodule(&p).unwrap()).unwrap();
        assert_eq!(
            lifted.witness().unwrap().render(am.module()),
            "((1,2),(2,2),(2,2);(1,1))"
        );
    }

    #[test]
    fn tensors_transfer() {
        let c = corpus(&[4, 6]);
        let vs = run(&c, "ttensor");
        assert!(vs.iter().any(|v| v.instance.starts_with("Z4 | Z4^3 |")));
        assert!(vs.iter().all(Verdict::is_holds));
    }

    #[test]
    fn inapplicable_instances_give_no_verdict() {
        let c = corpus(&[4]);
        assert!(run(&c, "tcar").is_empty());
        assert!(run(&c, "lemfin").is_empty());
        assert!(run(&c, "lemfin3").is_empty());
    }

    #[test]
    fn caps_turn_into_skips() {
        let mut cfg = CorpusConfig::empty();
        cfg.zmods = vec![12];
        cfg.caps.mclosed_module = 4;
        let c = Corpus::generate(&cfg).unwrap();
        let vs = run(&c, "pro9");
        let whole: Vec<&Verdict> = vs.iter().filter(|v| v.instance == "Z12 | Z12").collect();
        assert_eq!(whole.len(), 1);
        assert!(
            matches!(&whole[0].outcome, crate::lab::Outcome::Skipped { reason } if reason.contains("mclosed_module"))
        );
        assert!(vs.iter().any(Verdict::is_holds));
    }
}
