//! Submodule class predicates.
//!
//! Every predicate sweeps its defining quantifier through the module action
//! table (`a(b(cm))`, never `(abc)m`), and returns the lexicographically least
//! violating tuple. The characterizations in [`classical_1abs_oracles`] go the
//! other way, through ring products and residual bitsets, so the two routes
//! check each other.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::module::{FiniteModule, Submodule, MAX_ALL_SUBMODULES};
use crate::ring::{one_absorbing_witness, FiniteRing, Ideal};

/// Ring elements followed by one module element, e.g. `(a, b, c; m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub scalars: Vec<usize>,
    pub element: usize,
}

impl Witness {
    pub fn new(scalars: Vec<usize>, element: usize) -> Self {
        Witness { scalars, element }
    }

    /// Renders with element names, e.g. `(2,2,3;(0,0,1))`.
    pub fn render(&self, module: &FiniteModule) -> String {
        let r = module.ring();
        let s: Vec<&str> = self.scalars.iter().map(|&a| r.name(a)).collect();
        format!("({};{})", s.join(","), module.name(self.element))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.scalars.iter().map(|a| a.to_string()).collect();
        write!(f, "({};{})", s.join(","), self.element)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Prime,
    ClassicalPrime,
    Semiprime,
    OneAbsorbingPrime,
    ClassicalOneAbsorbingPrime,
    ClassicalTwoAbsorbing,
}

impl Class {
    pub const ALL: [Class; 6] = [
        Class::Prime,
        Class::ClassicalPrime,
        Class::Semiprime,
        Class::OneAbsorbingPrime,
        Class::ClassicalOneAbsorbingPrime,
        Class::ClassicalTwoAbsorbing,
    ];

    /// Column name used in tables and reports.
    pub fn column(self) -> &'static str {
        match self {
            Class::Prime => "prime",
            Class::ClassicalPrime => "classical_prime",
            Class::Semiprime => "semiprime",
            Class::OneAbsorbingPrime => "1abs_prime",
            Class::ClassicalOneAbsorbingPrime => "classical_1abs_prime",
            Class::ClassicalTwoAbsorbing => "classical_2abs",
        }
    }

    /// Number of ring elements in a witness.
    pub fn arity(self) -> usize {
        match self {
            Class::Prime | Class::Semiprime => 1,
            Class::ClassicalPrime => 2,
            _ => 3,
        }
    }

    /// Whether the predicate quantifies over nonunits only.
    pub fn nonunit_quantified(self) -> bool {
        matches!(self, Class::OneAbsorbingPrime | Class::ClassicalOneAbsorbingPrime)
    }

    pub fn decide(self, p: &Submodule) -> Result<Decision<Witness>> {
        match self {
            Class::Prime => is_prime(p),
            Class::ClassicalPrime => is_classical_prime(p),
            Class::Semiprime => is_semiprime(p),
            Class::OneAbsorbingPrime => is_one_absorbing_prime(p),
            Class::ClassicalOneAbsorbingPrime => is_classical_one_absorbing_prime(p),
            Class::ClassicalTwoAbsorbing => is_classical_two_absorbing(p),
        }
    }

    /// Re-evaluates the defining condition on one tuple.
    pub fn violates(self, p: &Submodule, w: &Witness) -> bool {
        let m = p.module();
        let r = m.ring();
        let (n, k) = (r.size(), m.size());
        if w.scalars.len() != self.arity()
            || w.element >= k
            || w.scalars.iter().any(|&a| a >= n)
            || (self.nonunit_quantified() && w.scalars.iter().any(|&a| r.is_unit(a)))
        {
            return false;
        }
        let x = w.element;
        let inp = |y: usize| p.contains(y);
        let s = &w.scalars;
        match self {
            Class::Prime => {
                let a = s[0];
                inp(m.act(a, x)) && !inp(x) && (0..k).any(|y| !inp(m.act(a, y)))
            }
            Class::ClassicalPrime => {
                let (a, b) = (s[0], s[1]);
                inp(m.act(a, m.act(b, x))) && !inp(m.act(a, x)) && !inp(m.act(b, x))
            }
            Class::Semiprime => {
                let a = s[0];
                inp(m.act(a, m.act(a, x))) && !inp(m.act(a, x))
            }
            Class::OneAbsorbingPrime => {
                let (a, b, c) = (s[0], s[1], s[2]);
                let cm = m.act(c, x);
                inp(m.act(a, m.act(b, cm))) && !inp(cm) && (0..k).any(|y| !inp(m.act(a, m.act(b, y))))
            }
            Class::ClassicalOneAbsorbingPrime => {
                let (a, b, c) = (s[0], s[1], s[2]);
                let cm = m.act(c, x);
                inp(m.act(a, m.act(b, cm))) && !inp(m.act(a, m.act(b, x))) && !inp(cm)
            }
            Class::ClassicalTwoAbsorbing => {
                let (a, b, c) = (s[0], s[1], s[2]);
                let cm = m.act(c, x);
                inp(m.act(a, m.act(b, cm))) && !inp(m.act(a, m.act(b, x))) && !inp(m.act(a, cm)) && !inp(m.act(b, cm))
            }
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Shared entry checks: a nonzero ring and a proper submodule.
fn entry(p: &Submodule) -> Result<()> {
    if p.module().ring().size() < 2 {
        return Err(Error::InvalidArgument(
            "the zero ring has no proper submodules to classify".into(),
        ));
    }
    p.require_proper()
}

struct Sweep<'a> {
    m: &'a FiniteModule,
    inp: Vec<bool>,
}

impl<'a> Sweep<'a> {
    fn new(p: &'a Submodule) -> Self {
        let m = p.module().as_ref();
        let inp = (0..m.size()).map(|x| p.contains(x)).collect();
        Sweep { m, inp }
    }

    fn size(&self) -> usize {
        self.m.size()
    }

    fn ring(&self) -> &FiniteRing {
        self.m.ring()
    }

    /// `[a(b y) ∈ P for y in M]`.
    fn twice(&self, a: usize, b: usize) -> Vec<bool> {
        (0..self.size())
            .map(|y| self.inp[self.m.act(a, self.m.act(b, y))])
            .collect()
    }

    fn once(&self, a: usize) -> Vec<bool> {
        (0..self.size()).map(|y| self.inp[self.m.act(a, y)]).collect()
    }
}

/// `am ∈ P ⇒ a ∈ (P :_A M) or m ∈ P`; witness `(a; m)`.
pub fn is_prime(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    for a in 0..s.ring().size() {
        let row = s.once(a);
        if row.iter().all(|&x| x) {
            continue;
        }
        if let Some(m) = (0..s.size()).find(|&m| row[m] && !s.inp[m]) {
            return Ok(Decision::Fails(Witness::new(vec![a], m)));
        }
    }
    Ok(Decision::Holds)
}

/// `abm ∈ P ⇒ am ∈ P or bm ∈ P`; witness `(a, b; m)`.
pub fn is_classical_prime(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    let n = s.ring().size();
    let rows: Vec<Vec<bool>> = (0..n).map(|a| s.once(a)).collect();
    for (a, row) in rows.iter().enumerate() {
        for b in 0..n {
            for m in 0..s.size() {
                let bm = s.m.act(b, m);
                if row[bm] && !row[m] && !s.inp[bm] {
                    return Ok(Decision::Fails(Witness::new(vec![a, b], m)));
                }
            }
        }
    }
    Ok(Decision::Holds)
}

/// `a²m ∈ P ⇒ am ∈ P`; witness `(a; m)`.
pub fn is_semiprime(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    for a in 0..s.ring().size() {
        for m in 0..s.size() {
            let am = s.m.act(a, m);
            if s.inp[s.m.act(a, am)] && !s.inp[am] {
                return Ok(Decision::Fails(Witness::new(vec![a], m)));
            }
        }
    }
    Ok(Decision::Holds)
}

/// Nonunits `a, b, c`: `abcm ∈ P ⇒ ab ∈ (P :_A M) or cm ∈ P`; witness `(a, b, c; m)`.
pub fn is_one_absorbing_prime(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    let nu = s.ring().nonunits();
    let mut swept = vec![false; s.ring().size()];
    for &a in &nu {
        for &b in &nu {
            // a(by) = (ab)y, so a pair whose product was already swept cannot fail.
            let ab = s.ring().mul(a, b);
            if std::mem::replace(&mut swept[ab], true) {
                continue;
            }
            let f = s.twice(a, b);
            if f.iter().all(|&x| x) {
                continue;
            }
            for &c in &nu {
                for m in 0..s.size() {
                    let cm = s.m.act(c, m);
                    if f[cm] && !s.inp[cm] {
                        return Ok(Decision::Fails(Witness::new(vec![a, b, c], m)));
                    }
                }
            }
        }
    }
    Ok(Decision::Holds)
}

/// Nonunits `a, b, c`: `abcm ∈ P ⇒ abm ∈ P or cm ∈ P`; witness `(a, b, c; m)`.
pub fn is_classical_one_absorbing_prime(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    let nu = s.ring().nonunits();
    let cms: Vec<Vec<usize>> = nu
        .iter()
        .map(|&c| (0..s.size()).map(|m| s.m.act(c, m)).collect())
        .collect();
    let mut swept = vec![false; s.ring().size()];
    for &a in &nu {
        for &b in &nu {
            let ab = s.ring().mul(a, b);
            if std::mem::replace(&mut swept[ab], true) {
                continue;
            }
            let f = s.twice(a, b);
            for (ci, &c) in nu.iter().enumerate() {
                for (m, &cm) in cms[ci].iter().enumerate() {
                    if f[cm] && !f[m] && !s.inp[cm] {
                        return Ok(Decision::Fails(Witness::new(vec![a, b, c], m)));
                    }
                }
            }
        }
    }
    Ok(Decision::Holds)
}

/// Scalar triples visited per module element by the classical 1-absorbing
/// prime sweep: distinct nonunit products `ab` times nonunits `c`.
pub fn c1ap_sweep_factor(ring: &FiniteRing) -> u64 {
    let nu = ring.nonunits();
    let mut products = vec![false; ring.size()];
    for &a in &nu {
        for &b in &nu {
            products[ring.mul(a, b)] = true;
        }
    }
    products.iter().filter(|&&x| x).count() as u64 * nu.len() as u64
}

/// All `a, b, c`: `abcm ∈ P ⇒ abm ∈ P or acm ∈ P or bcm ∈ P`; witness `(a, b, c; m)`.
pub fn is_classical_two_absorbing(p: &Submodule) -> Result<Decision<Witness>> {
    entry(p)?;
    let s = Sweep::new(p);
    let n = s.ring().size();
    let rows: Vec<Vec<bool>> = (0..n).map(|a| s.once(a)).collect();
    for a in 0..n {
        for b in 0..n {
            let f = s.twice(a, b);
            for c in 0..n {
                for m in 0..s.size() {
                    let cm = s.m.act(c, m);
                    if f[cm] && !f[m] && !rows[a][cm] && !rows[b][cm] {
                        return Ok(Decision::Fails(Witness::new(vec![a, b, c], m)));
                    }
                }
            }
        }
    }
    Ok(Decision::Holds)
}

/// All six predicates for one submodule.
#[derive(Debug, Clone)]
pub struct ClassReport {
    submodule: Submodule,
    results: BTreeMap<Class, Decision<Witness>>,
    vacuous: bool,
}

impl ClassReport {
    /// Classifies `p` and rejects the result if the flags break an implication
    /// that holds for every proper submodule.
    pub fn new(p: &Submodule) -> Result<Self> {
        let mut results = BTreeMap::new();
        for c in Class::ALL {
            results.insert(c, c.decide(p)?);
        }
        let report = ClassReport {
            submodule: p.clone(),
            results,
            vacuous: p.module().ring().is_field_like(),
        };
        report.check_implications()?;
        Ok(report)
    }

    fn check_implications(&self) -> Result<()> {
        use Class::*;
        let f = |c| self.holds(c);
        let rules: [(&str, bool); 6] = [
            ("prime => classical_prime", !f(Prime) || f(ClassicalPrime)),
            (
                "classical_prime => classical_1abs_prime",
                !f(ClassicalPrime) || f(ClassicalOneAbsorbingPrime),
            ),
            (
                "classical_1abs_prime => classical_2abs",
                !f(ClassicalOneAbsorbingPrime) || f(ClassicalTwoAbsorbing),
            ),
            (
                "1abs_prime => classical_1abs_prime",
                !f(OneAbsorbingPrime) || f(ClassicalOneAbsorbingPrime),
            ),
            ("classical_prime => semiprime", !f(ClassicalPrime) || f(Semiprime)),
            (
                "classical_1abs_prime and semiprime => classical_prime",
                !(f(ClassicalOneAbsorbingPrime) && f(Semiprime)) || f(ClassicalPrime),
            ),
        ];
        match rules.iter().find(|(_, ok)| !ok) {
            None => Ok(()),
            Some((rule, _)) => Err(Error::ChainViolation(format!(
                "{rule} fails for {}",
                self.submodule.short_name()
            ))),
        }
    }

    pub fn submodule(&self) -> &Submodule {
        &self.submodule
    }

    pub fn holds(&self, c: Class) -> bool {
        self.results[&c].holds()
    }

    pub fn decision(&self, c: Class) -> &Decision<Witness> {
        &self.results[&c]
    }

    pub fn witness(&self, c: Class) -> Option<&Witness> {
        self.results[&c].witness()
    }

    /// True when every element is 0 or a unit, so the nonunit-quantified
    /// predicates hold for lack of content.
    pub fn vacuous(&self) -> bool {
        self.vacuous
    }
}

/// The equivalent forms of classical 1-absorbing primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Characterization {
    /// `(P:_M abc) = (P:_M ab) ∪ (P:_M c)`.
    ResidualUnion,
    /// `abm ∉ P ⇒ (P:_A abm) = (P:_A m)`.
    ElementResidual,
    /// `aIbm ⊆ P ⇒ aIm ⊆ P or bm ∈ P`.
    IdealScalarPair,
    /// `aIm ⊄ P ⇒ (P:_A aIm) = (P:_A m)`.
    IdealScalarResidual,
    /// `aIJm ⊆ P ⇒ aIm ⊆ P or Jm ⊆ P`.
    IdealPairScalar,
    /// `IJm ⊄ P ⇒ (P:_A IJm) = (P:_A m)`.
    IdealPairResidual,
    /// `IJKm ⊆ P ⇒ IJm ⊆ P or Km ⊆ P`.
    IdealTriple,
    /// `m ∉ P ⇒ (P:_A m)` is a 1-absorbing prime ideal.
    ElementColon,
    /// `(P:_M abc) = (P:_M ab)` or `(P:_M abc) = (P:_M c)`.
    ResidualDichotomy,
    /// `abcL ⊆ P ⇒ abL ⊆ P or cL ⊆ P`.
    SubmoduleScalars,
    /// `abL ⊄ P ⇒ (P:_A abL) = (P:_A L)`.
    SubmoduleResidual,
    /// `abIL ⊆ P ⇒ abL ⊆ P or IL ⊆ P`.
    SubmoduleIdealScalarPair,
    /// `aIL ⊄ P ⇒ (P:_A aIL) = (P:_A L)`.
    SubmoduleIdealScalarResidual,
    /// `aIJL ⊆ P ⇒ aIL ⊆ P or JL ⊆ P`.
    SubmoduleIdealPairScalar,
    /// `IJL ⊄ P ⇒ (P:_A IJL) = (P:_A L)`.
    SubmoduleIdealPairResidual,
    /// `IJKL ⊆ P ⇒ IJL ⊆ P or KL ⊆ P`.
    SubmoduleIdealTriple,
    /// `L ⊄ P ⇒ (P:_A L)` is a 1-absorbing prime ideal.
    SubmoduleColon,
}

impl Characterization {
    pub const ALL: [Characterization; 17] = {
        use Characterization::*;
        [
            ResidualUnion,
            ElementResidual,
            IdealScalarPair,
            IdealScalarResidual,
            IdealPairScalar,
            IdealPairResidual,
            IdealTriple,
            ElementColon,
            ResidualDichotomy,
            SubmoduleScalars,
            SubmoduleResidual,
            SubmoduleIdealScalarPair,
            SubmoduleIdealScalarResidual,
            SubmoduleIdealPairScalar,
            SubmoduleIdealPairResidual,
            SubmoduleIdealTriple,
            SubmoduleColon,
        ]
    };

    pub fn name(self) -> &'static str {
        use Characterization::*;
        match self {
            ResidualUnion => "residual_union",
            ElementResidual => "element_residual",
            IdealScalarPair => "ideal_scalar_pair",
            IdealScalarResidual => "ideal_scalar_residual",
            IdealPairScalar => "ideal_pair_scalar",
            IdealPairResidual => "ideal_pair_residual",
            IdealTriple => "ideal_triple",
            ElementColon => "element_colon",
            ResidualDichotomy => "residual_dichotomy",
            SubmoduleScalars => "submodule_scalars",
            SubmoduleResidual => "submodule_residual",
            SubmoduleIdealScalarPair => "submodule_ideal_scalar_pair",
            SubmoduleIdealScalarResidual => "submodule_ideal_scalar_residual",
            SubmoduleIdealPairScalar => "submodule_ideal_pair_scalar",
            SubmoduleIdealPairResidual => "submodule_ideal_pair_residual",
            SubmoduleIdealTriple => "submodule_ideal_triple",
            SubmoduleColon => "submodule_colon",
        }
    }

    /// Quantifies over ring ideals.
    pub fn uses_ideals(self) -> bool {
        use Characterization::*;
        matches!(
            self,
            IdealScalarPair
                | IdealScalarResidual
                | IdealPairScalar
                | IdealPairResidual
                | IdealTriple
                | SubmoduleIdealScalarPair
                | SubmoduleIdealScalarResidual
                | SubmoduleIdealPairScalar
                | SubmoduleIdealPairResidual
                | SubmoduleIdealTriple
        )
    }

    /// Quantifies over the submodule lattice.
    pub fn uses_submodules(self) -> bool {
        use Characterization::*;
        matches!(
            self,
            SubmoduleScalars
                | SubmoduleResidual
                | SubmoduleIdealScalarPair
                | SubmoduleIdealScalarResidual
                | SubmoduleIdealPairScalar
                | SubmoduleIdealPairResidual
                | SubmoduleIdealTriple
                | SubmoduleColon
        )
    }
}

impl fmt::Display for Characterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleOutcome {
    Holds,
    Fails,
    Skipped(String),
}

impl OracleOutcome {
    fn from_bool(b: bool) -> Self {
        if b {
            OracleOutcome::Holds
        } else {
            OracleOutcome::Fails
        }
    }

    /// `Some(truth)` unless skipped.
    pub fn truth(&self) -> Option<bool> {
        match self {
            OracleOutcome::Holds => Some(true),
            OracleOutcome::Fails => Some(false),
            OracleOutcome::Skipped(_) => None,
        }
    }
}

/// Work limits for the ideal- and submodule-quantified characterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    /// Estimated elementary steps allowed per characterization.
    pub work_budget: u64,
    pub max_module: usize,
    pub max_submodules: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            work_budget: 4_000_000,
            max_module: MAX_ALL_SUBMODULES,
            max_submodules: MAX_ALL_SUBMODULES,
        }
    }
}

/// Ring-side helper: products, scaled sets and colon sets over `A`.
struct RingOps<'a> {
    r: &'a FiniteRing,
}

impl RingOps<'_> {
    /// `{x·y : y ∈ set}`.
    fn scale(&self, x: usize, set: &Bits) -> Bits {
        Bits::from_indices(self.r.size(), set.iter().map(|y| self.r.mul(x, y)))
    }

    /// `{r : r·x ∈ target for every x ∈ set}`.
    fn colon(&self, set: &Bits, target: &Bits) -> Bits {
        let xs = set.to_vec();
        Bits::from_indices(
            self.r.size(),
            (0..self.r.size()).filter(|&r| xs.iter().all(|&x| target.contains(self.r.mul(r, x)))),
        )
    }
}

/// Distinct values of a family of proper ideals, each with its 1-absorbing verdict
/// computed lazily.
struct ColonFamily {
    values: Vec<Bits>,
}

impl ColonFamily {
    fn new(all: impl IntoIterator<Item = Bits>) -> Self {
        let mut values: Vec<Bits> = all.into_iter().collect();
        values.sort();
        values.dedup();
        ColonFamily { values }
    }
}

/// Evaluates every characterization independently; forms whose quantifier
/// would exceed the caps come back `Skipped`.
pub fn classical_1abs_oracles(p: &Submodule, caps: &OracleCaps) -> Result<BTreeMap<Characterization, OracleOutcome>> {
    use Characterization::*;
    entry(p)?;
    let m = p.module();
    let ring = m.ring();
    let ops = RingOps { r: ring };
    let (n, k) = (ring.size(), m.size());
    let nu = ring.nonunits();
    let w = |x: usize| x as u64;

    // Q_r = (P :_M r) and R_m = (P :_A m).
    let q: Vec<Bits> = (0..n).map(|r| p.residual_by_scalar(r).members().clone()).collect();
    let rm: Vec<Bits> = (0..k).map(|x| p.residual_by_element(x).members().clone()).collect();

    let mut out = BTreeMap::new();

    out.insert(
        ResidualUnion,
        OracleOutcome::from_bool(nu.iter().all(|&a| {
            nu.iter().all(|&b| {
                let ab = ring.mul(a, b);
                nu.iter().all(|&c| q[ring.mul(ab, c)] == q[ab].union(&q[c]))
            })
        })),
    );
    out.insert(
        ResidualDichotomy,
        OracleOutcome::from_bool(nu.iter().all(|&a| {
            nu.iter().all(|&b| {
                let ab = ring.mul(a, b);
                nu.iter().all(|&c| {
                    let abc = ring.mul(ab, c);
                    q[abc] == q[ab] || q[abc] == q[c]
                })
            })
        })),
    );
    out.insert(
        ElementResidual,
        OracleOutcome::from_bool(nu.iter().all(|&a| {
            nu.iter().all(|&b| {
                let ab = ring.mul(a, b);
                (0..k).all(|x| {
                    let abm = m.act(ab, x);
                    p.contains(abm) || rm[abm] == rm[x]
                })
            })
        })),
    );

    let mut one_abs: HashMap<Bits, bool> = HashMap::new();
    let mut is_one_abs = |b: &Bits| -> bool {
        *one_abs
            .entry(b.clone())
            .or_insert_with(|| one_absorbing_witness(ring, b).is_none())
    };
    out.insert(
        ElementColon,
        OracleOutcome::from_bool((0..k).filter(|&x| !p.contains(x)).all(|x| is_one_abs(&rm[x]))),
    );

    // The ideal-quantified forms only depend on the residual, so each distinct
    // (P :_A m) is checked once.
    let r_family = ColonFamily::new((0..k).map(|x| rm[x].clone()));

    let ideals = match ring.ideals() {
        Ok(all) => Some(all),
        Err(e) => {
            let reason = format!("ideal enumeration: {e}");
            for c in Characterization::ALL.iter().filter(|c| c.uses_ideals()) {
                out.insert(*c, OracleOutcome::Skipped(reason.clone()));
            }
            None
        }
    };

    let lattice: Option<Vec<Bits>> = match m.lattice_bits(caps.max_module, caps.max_submodules) {
        Ok(l) => Some(l.to_vec()),
        Err(e) => {
            let reason = format!("submodule enumeration: {e}");
            for c in Characterization::ALL.iter().filter(|c| c.uses_submodules()) {
                out.insert(*c, OracleOutcome::Skipped(reason.clone()));
            }
            None
        }
    };

    // T_L = (P :_A L) = {r : L ⊆ Q_r}.
    let t_family = lattice.as_ref().map(|lat| {
        let tl: Vec<Bits> = lat
            .iter()
            .map(|l| Bits::from_indices(n, (0..n).filter(|&r| l.is_subset(&q[r]))))
            .collect();
        tl
    });

    if let Some(lat) = &lattice {
        let tl = t_family.as_ref().expect("computed with the lattice");
        let within = |work: u64| work <= caps.work_budget;
        let nl = w(lat.len());
        let nnu = w(nu.len());
        let work = nnu.pow(3) * nl;
        out.insert(
            SubmoduleScalars,
            if within(work) {
                OracleOutcome::from_bool(nu.iter().all(|&a| {
                    nu.iter().all(|&b| {
                        let ab = ring.mul(a, b);
                        nu.iter().all(|&c| {
                            let abc = ring.mul(ab, c);
                            lat.iter()
                                .all(|l| !l.is_subset(&q[abc]) || l.is_subset(&q[ab]) || l.is_subset(&q[c]))
                        })
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );
        out.insert(
            SubmoduleColon,
            OracleOutcome::from_bool(
                lat.iter()
                    .zip(tl)
                    .filter(|(l, _)| !l.is_subset(p.members()))
                    .all(|(_, t)| is_one_abs(t)),
            ),
        );
        let t_distinct = ColonFamily::new(tl.iter().cloned());
        let work = nnu * nnu * w(t_distinct.values.len()) * w(n);
        out.insert(
            SubmoduleResidual,
            if within(work) {
                OracleOutcome::from_bool(nu.iter().all(|&a| {
                    nu.iter().all(|&b| {
                        let ab = Bits::from_indices(n, [ring.mul(a, b)]);
                        t_distinct
                            .values
                            .iter()
                            .all(|t| ab.is_subset(t) || ops.colon(&ab, t) == *t)
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );
        if let Some(ideals) = &ideals {
            let forms = IdealForms::new(ring, ideals);
            forms.evaluate(
                &t_distinct,
                &nu,
                caps,
                [
                    SubmoduleIdealScalarPair,
                    SubmoduleIdealScalarResidual,
                    SubmoduleIdealPairScalar,
                    SubmoduleIdealPairResidual,
                    SubmoduleIdealTriple,
                ],
                &mut out,
            );
        }
    }

    if let Some(ideals) = &ideals {
        let forms = IdealForms::new(ring, ideals);
        forms.evaluate(
            &r_family,
            &nu,
            caps,
            [
                IdealScalarPair,
                IdealScalarResidual,
                IdealPairScalar,
                IdealPairResidual,
                IdealTriple,
            ],
            &mut out,
        );
    }

    Ok(out)
}

fn skip_work(work: u64, caps: &OracleCaps) -> OracleOutcome {
    OracleOutcome::Skipped(format!("work estimate {work} exceeds budget {}", caps.work_budget))
}

/// The five ideal-quantified shapes, evaluated against a family of colon
/// ideals `T` (either `(P :_A m)` or `(P :_A L)`):
/// `abI ⊆ T ⇒ ab ∈ T or I ⊆ T` in the submodule form and
/// `abI ⊆ T ⇒ aI ⊆ T or b ∈ T` in the element form, then the residual and
/// pair/triple variants.
struct IdealForms<'a> {
    ring: &'a FiniteRing,
    proper: Vec<Bits>,
    /// `IJ` for proper `I, J`, indexed `i * len + j`.
    pairs: Vec<Bits>,
}

impl<'a> IdealForms<'a> {
    fn new(ring: &'a FiniteRing, ideals: &[Ideal]) -> Self {
        let proper: Vec<&Ideal> = ideals.iter().filter(|i| i.is_proper()).collect();
        let mut pairs = Vec::with_capacity(proper.len() * proper.len());
        for i in &proper {
            for j in &proper {
                pairs.push(i.product(j).expect("same ring").members().clone());
            }
        }
        IdealForms {
            ring,
            proper: proper.iter().map(|i| i.members().clone()).collect(),
            pairs,
        }
    }

    fn evaluate(
        &self,
        family: &ColonFamily,
        nu: &[usize],
        caps: &OracleCaps,
        which: [Characterization; 5],
        out: &mut BTreeMap<Characterization, OracleOutcome>,
    ) {
        let ops = RingOps { r: self.ring };
        let r = self.ring;
        let n = r.size() as u64;
        let ni = self.proper.len() as u64;
        let nt = family.values.len() as u64;
        let nnu = nu.len() as u64;
        let ts = &family.values;
        let np = self.proper.len();
        let pair = |i: usize, j: usize| &self.pairs[i * np + j];
        let element_form = which[0] == Characterization::IdealScalarPair;

        // abI ⊆ T ⇒ (aI ⊆ T or b ∈ T) [element form] / (ab ∈ T or I ⊆ T) [submodule form]
        let work = nnu * nnu * ni * nt * n;
        out.insert(
            which[0],
            if work <= caps.work_budget {
                OracleOutcome::from_bool(nu.iter().all(|&a| {
                    nu.iter().all(|&b| {
                        let ab = r.mul(a, b);
                        self.proper.iter().all(|i| {
                            let abi = ops.scale(ab, i);
                            let ai = ops.scale(a, i);
                            ts.iter().all(|t| {
                                !abi.is_subset(t)
                                    || if element_form {
                                        ai.is_subset(t) || t.contains(b)
                                    } else {
                                        t.contains(ab) || i.is_subset(t)
                                    }
                            })
                        })
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );

        // aI ⊄ T ⇒ colon(aI, T) = T
        let work = nnu * ni * nt * n * n;
        out.insert(
            which[1],
            if work <= caps.work_budget {
                OracleOutcome::from_bool(nu.iter().all(|&a| {
                    self.proper.iter().all(|i| {
                        let ai = ops.scale(a, i);
                        ts.iter().all(|t| ai.is_subset(t) || ops.colon(&ai, t) == *t)
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );

        // aIJ ⊆ T ⇒ aI ⊆ T or J ⊆ T
        let work = nnu * ni * ni * nt * n;
        out.insert(
            which[2],
            if work <= caps.work_budget {
                OracleOutcome::from_bool(nu.iter().all(|&a| {
                    (0..np).all(|i| {
                        let ai = ops.scale(a, &self.proper[i]);
                        (0..np).all(|j| {
                            let aij = ops.scale(a, pair(i, j));
                            ts.iter()
                                .all(|t| !aij.is_subset(t) || ai.is_subset(t) || self.proper[j].is_subset(t))
                        })
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );

        // IJ ⊄ T ⇒ colon(IJ, T) = T
        let work = ni * ni * nt * n * n;
        out.insert(
            which[3],
            if work <= caps.work_budget {
                OracleOutcome::from_bool((0..np).all(|i| {
                    (0..np).all(|j| {
                        let ij = pair(i, j);
                        ts.iter().all(|t| ij.is_subset(t) || ops.colon(ij, t) == *t)
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );

        // IJK ⊆ T ⇒ IJ ⊆ T or K ⊆ T
        let work = ni * ni * ni * nt * n;
        out.insert(
            which[4],
            if work <= caps.work_budget {
                OracleOutcome::from_bool((0..np).all(|i| {
                    (0..np).all(|j| {
                        let ij = pair(i, j);
                        (0..np).all(|kk| {
                            let ijk = product_bits(r, ij, &self.proper[kk]);
                            ts.iter()
                                .all(|t| !ijk.is_subset(t) || ij.is_subset(t) || self.proper[kk].is_subset(t))
                        })
                    })
                }))
            } else {
                skip_work(work, caps)
            },
        );
    }
}

fn product_bits(r: &FiniteRing, x: &Bits, y: &Bits) -> Bits {
    let ys = y.to_vec();
    r.span_bits(x.iter().flat_map(|a| ys.iter().map(move |&b| r.mul(a, b))))
}

/// Which side of `(P:_A abcm) = (P:_A abm) ∪ (P:_A cm)` the left side equals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnionSide {
    /// `(P:_A abcm) = (P:_A abm)`.
    Abm,
    /// `(P:_A abcm) = (P:_A cm)`.
    Cm,
    /// Both residuals coincide with it.
    Both,
}

#[derive(Debug, Clone)]
pub struct ResidualUnion {
    pub abcm: Ideal,
    pub abm: Ideal,
    pub cm: Ideal,
    pub side: UnionSide,
}

/// For a classical 1-absorbing prime `P` and nonunits `a, b, c`, checks that
/// `(P:_A abcm)` is the union of `(P:_A abm)` and `(P:_A cm)` and reports
/// which one it equals.
pub fn residual_union_decomposition(p: &Submodule, a: usize, b: usize, c: usize, x: usize) -> Result<ResidualUnion> {
    entry(p)?;
    let m = p.module();
    let r = m.ring();
    for &s in &[a, b, c] {
        if s >= r.size() {
            return Err(Error::OutOfRange {
                index: s,
                size: r.size(),
            });
        }
        if r.is_unit(s) {
            return Err(Error::InvalidArgument(format!("{} is a unit", r.name(s))));
        }
    }
    if x >= m.size() {
        return Err(Error::OutOfRange {
            index: x,
            size: m.size(),
        });
    }
    if !is_classical_one_absorbing_prime(p)?.holds() {
        return Err(Error::InvalidArgument(format!(
            "{} is not classical 1-absorbing prime",
            p.short_name()
        )));
    }
    let cm = m.act(c, x);
    let bcm = m.act(b, cm);
    let abcm_el = m.act(a, bcm);
    let abm_el = m.act(a, m.act(b, x));
    let abcm = p.residual_by_element(abcm_el);
    let abm = p.residual_by_element(abm_el);
    let cmr = p.residual_by_element(cm);
    if *abcm.members() != abm.members().union(cmr.members()) {
        return Err(Error::ChainViolation(format!(
            "residual of abcm is not the union at ({a},{b},{c};{x})"
        )));
    }
    let side = match (abcm == abm, abcm == cmr) {
        (true, true) => UnionSide::Both,
        (true, false) => UnionSide::Abm,
        (false, true) => UnionSide::Cm,
        (false, false) => {
            return Err(Error::ChainViolation(format!(
                "residual of abcm equals neither side at ({a},{b},{c};{x})"
            )))
        }
    };
    Ok(ResidualUnion {
        abcm,
        abm,
        cm: cmr,
        side,
    })
}

/// The ⊆-minimal classical 1-absorbing prime submodules.
pub fn minimal_classical_1abs_primes(module: &Arc<FiniteModule>) -> Result<Vec<Submodule>> {
    if module.ring().size() < 2 {
        return Err(Error::InvalidArgument(
            "the zero ring has no proper submodules to classify".into(),
        ));
    }
    let mut found = Vec::new();
    for s in module.all_submodules()? {
        if s.is_proper() && is_classical_one_absorbing_prime(&s)?.holds() {
            found.push(s);
        }
    }
    Ok(found
        .iter()
        .filter(|p| !found.iter().any(|k| k != *p && k.is_subset(p)))
        .cloned()
        .collect())
}

/// Largest module handled by the m-closed quantifier.
pub const MCLOSED_MAX_MODULE: usize = 16;
/// Largest ideal count handled by the m-closed quantifier.
pub const MCLOSED_MAX_IDEALS: usize = 16;

/// Violating `(I, J, K, L, N)` for the m-closed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MClosedWitness {
    pub i: Ideal,
    pub j: Ideal,
    pub k: Ideal,
    pub l: Submodule,
    pub n: Submodule,
}

impl fmt::Display for MClosedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "I={}, J={}, K={}, L={}, N={}",
            self.i,
            self.j,
            self.k,
            self.l.short_name(),
            self.n.short_name()
        )
    }
}

fn check_set(module: &Arc<FiniteModule>, s: &Bits) -> Result<()> {
    if s.len() != module.size() {
        return Err(Error::Shape(format!(
            "set over {} elements given for a module of size {}",
            s.len(),
            module.size()
        )));
    }
    if s.contains(module.zero()) {
        return Err(Error::InvalidArgument("the set must avoid 0".into()));
    }
    Ok(())
}

/// For proper ideals `I, J, K` and submodules `L, N`: `(N+IJL) ∩ S ≠ ∅` and
/// `(N+KL) ∩ S ≠ ∅` imply `(N+IJKL) ∩ S ≠ ∅`. Least witness in `(I,J,K,L,N)`
/// order, ideals and submodules in canonical order.
pub fn is_c1ap_m_closed(module: &Arc<FiniteModule>, s: &Bits) -> Result<Decision<MClosedWitness>> {
    check_set(module, s)?;
    if module.ring().size() < 2 {
        return Err(Error::InvalidArgument("the zero ring has no proper ideals".into()));
    }
    module.check_size(MCLOSED_MAX_MODULE)?;
    let ideals = module.ring().ideals()?;
    if ideals.len() > MCLOSED_MAX_IDEALS {
        return Err(Error::TooLarge {
            what: "ideal lattice",
            size: ideals.len(),
            cap: MCLOSED_MAX_IDEALS,
        });
    }
    let lattice = module.all_submodules()?;
    let pos: HashMap<&Bits, usize> = lattice.iter().enumerate().map(|(i, l)| (l.members(), i)).collect();
    let ideal_pos: HashMap<&Bits, usize> = ideals.iter().enumerate().map(|(i, x)| (x.members(), i)).collect();
    let nl = lattice.len();

    // XL for every ideal X and submodule L, as a lattice index.
    let mut xl = vec![0usize; ideals.len() * nl];
    for (x, ideal) in ideals.iter().enumerate() {
        for (l, sub) in lattice.iter().enumerate() {
            xl[x * nl + l] = pos[ideal.times(sub)?.members()];
        }
    }
    // N + K as a lattice index, and whether it meets S.
    let mut sum = vec![0usize; nl * nl];
    for a in 0..nl {
        for b in 0..nl {
            sum[a * nl + b] = pos[lattice[a].sum(&lattice[b])?.members()];
        }
    }
    let meets: Vec<bool> = lattice.iter().map(|l| !l.members().is_disjoint(s)).collect();
    let hit = |nn: usize, k: usize| meets[sum[nn * nl + k]];

    let proper: Vec<usize> = (0..ideals.len()).filter(|&i| ideals[i].is_proper()).collect();
    for &i in &proper {
        for &j in &proper {
            let ij = ideals[i].product(&ideals[j])?;
            let ij_idx = ideal_pos[ij.members()];
            for &k in &proper {
                let ijk_idx = ideal_pos[ij.product(&ideals[k])?.members()];
                for l in 0..nl {
                    let (a, b, c) = (xl[ij_idx * nl + l], xl[k * nl + l], xl[ijk_idx * nl + l]);
                    for nn in 0..nl {
                        if hit(nn, a) && hit(nn, b) && !hit(nn, c) {
                            return Ok(Decision::Fails(MClosedWitness {
                                i: ideals[i].clone(),
                                j: ideals[j].clone(),
                                k: ideals[k].clone(),
                                l: lattice[l].clone(),
                                n: lattice[nn].clone(),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Decision::Holds)
}

/// Every ⊆-maximal submodule disjoint from `s`, in canonical order.
pub fn maximal_disjoint_submodules(module: &Arc<FiniteModule>, s: &Bits) -> Result<Vec<Submodule>> {
    check_set(module, s)?;
    let disjoint: Vec<Submodule> = module
        .all_submodules()?
        .into_iter()
        .filter(|l| l.members().is_disjoint(s))
        .collect();
    let mut max: Vec<Submodule> = disjoint
        .iter()
        .filter(|l| !disjoint.iter().any(|k| k != *l && l.is_subset(k)))
        .cloned()
        .collect();
    max.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(max)
}

/// A maximal submodule disjoint from an m-closed set `s` (the least one in
/// canonical order), checked to be classical 1-absorbing prime.
pub fn krull_maximal_disjoint(module: &Arc<FiniteModule>, s: &Bits) -> Result<Submodule> {
    check_set(module, s)?;
    if s.is_empty() {
        return Err(Error::InvalidArgument(
            "empty set: the only maximal disjoint submodule is the whole module".into(),
        ));
    }
    if let Decision::Fails(w) = is_c1ap_m_closed(module, s)? {
        return Err(Error::NotMClosed(w.to_string()));
    }
    let p = maximal_disjoint_submodules(module, s)?
        .into_iter()
        .next()
        .expect("the zero submodule is disjoint from a set avoiding 0");
    if !is_classical_one_absorbing_prime(&p)?.holds() {
        return Err(Error::ChainViolation(format!(
            "maximal disjoint submodule {} is not classical 1-absorbing prime",
            p.short_name()
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{direct_sum, ProductModule};

    fn rmod(n: usize) -> Arc<FiniteModule> {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        Arc::new(FiniteModule::ring_as_module(&r))
    }

    fn sub(m: &Arc<FiniteModule>, gens: &[usize]) -> Submodule {
        Submodule::generated(m, gens).unwrap()
    }

    fn witness(d: Decision<Witness>) -> (Vec<usize>, usize) {
        let w = d.into_witness().expect("expected a failure");
        (w.scalars, w.element)
    }

    /// Z_2 × Z_4 over itself.
    fn z2z4() -> Arc<FiniteModule> {
        let pm = ProductModule::new(&[rmod(2), rmod(4)]).unwrap();
        Arc::clone(pm.module())
    }

    /// The zero submodule of Z_2 ⊕ Z_3 ⊕ Z_12 over Z_12.
    fn ternary_zero() -> Submodule {
        let m = rmod(12);
        let (q2, _) = m.quotient(&sub(&m, &[2])).unwrap();
        let (q3, _) = m.quotient(&sub(&m, &[3])).unwrap();
        let s = Arc::new(direct_sum(&[&q2, &q3, &m]).unwrap());
        s.zero_submodule()
    }

    #[test]
    fn prime_examples() {
        let m = z2z4();
        // {0} × <2>; element (a, b) sits at 4a + b
        let p = sub(&m, &[2]);
        assert_eq!(p.members().to_vec(), vec![0, 2]);
        let d = is_prime(&p).unwrap();
        assert!(!d.holds());
        assert!(Class::Prime.violates(&p, d.witness().unwrap()));
        // (P :_A (0,1)) = Z_2 × <2> is not prime, so P is not classical prime either
        let d = is_classical_prime(&p).unwrap();
        assert!(Class::ClassicalPrime.violates(&p, d.witness().unwrap()));
        assert_eq!(witness(is_prime(&rmod(6).zero_submodule()).unwrap()), (vec![2], 3));

        let z8 = rmod(8);
        assert!(is_prime(&sub(&z8, &[2])).unwrap().holds());
        assert_eq!(witness(is_prime(&sub(&z8, &[4])).unwrap()), (vec![2], 2));
        assert!(matches!(
            is_prime(&z8.whole()),
            Err(Error::ImproperArgument("submodule"))
        ));
    }

    #[test]
    fn classical_prime_and_semiprime_examples() {
        let z4 = rmod(4);
        assert_eq!(
            witness(is_classical_prime(&z4.zero_submodule()).unwrap()),
            (vec![2, 2], 1)
        );
        assert!(is_classical_prime(&sub(&rmod(8), &[2])).unwrap().holds());
        assert_eq!(witness(is_semiprime(&z4.zero_submodule()).unwrap()), (vec![2], 1));
        assert!(is_semiprime(&rmod(6).zero_submodule()).unwrap().holds());
        assert!(is_semiprime(&sub(&rmod(8), &[2])).unwrap().holds());
    }

    #[test]
    fn one_absorbing_examples() {
        let z18 = rmod(18);
        let (q2, _) = z18.quotient(&sub(&z18, &[2])).unwrap();
        let (q9, _) = z18.quotient(&sub(&z18, &[9])).unwrap();
        let s = Arc::new(direct_sum(&[&q2, &q9]).unwrap());
        let d = is_one_absorbing_prime(&s.zero_submodule()).unwrap();
        assert!(!d.holds());
        assert!(Class::OneAbsorbingPrime.violates(&s.zero_submodule(), d.witness().unwrap()));
        assert!(is_one_absorbing_prime(&sub(&rmod(8), &[4])).unwrap().holds());
        assert!(is_one_absorbing_prime(&rmod(4).zero_submodule()).unwrap().holds());
    }

    #[test]
    fn classical_one_absorbing_examples() {
        let z4 = rmod(4);
        assert!(is_classical_one_absorbing_prime(&z4.zero_submodule()).unwrap().holds());
        assert!(!is_classical_prime(&z4.zero_submodule()).unwrap().holds());
        assert!(is_classical_one_absorbing_prime(&sub(&rmod(8), &[2])).unwrap().holds());

        let p = ternary_zero();
        let d = is_classical_one_absorbing_prime(&p).unwrap();
        let w = d.witness().unwrap().clone();
        assert!(Class::ClassicalOneAbsorbingPrime.violates(&p, &w));
        // least tuple under row-major indexing
        assert_eq!(w.render(p.module()), "(2,2,3;(0,0,1))");
        assert!(Class::ClassicalOneAbsorbingPrime.violates(&p, &Witness::new(vec![2, 2, 3], 36 + 12 + 1)));
        // the Z_12 summand has torsion: 2·2·3 kills (0,0,1) while 4, 6, 6 do not
        assert!(Class::ClassicalTwoAbsorbing.violates(&p, &Witness::new(vec![2, 2, 3], 1)));
        assert!(!is_classical_two_absorbing(&p).unwrap().holds());
    }

    #[test]
    fn classical_two_absorbing_examples() {
        assert!(is_classical_two_absorbing(&rmod(4).zero_submodule()).unwrap().holds());
        assert!(is_classical_two_absorbing(&sub(&rmod(8), &[2])).unwrap().holds());
        let d = is_classical_two_absorbing(&rmod(8).zero_submodule()).unwrap();
        assert_eq!(witness(d), (vec![2, 2, 2], 1));
    }

    #[test]
    fn witnesses_are_least() {
        // brute force over all tuples in lexicographic order
        let m = rmod(12);
        for p in m.all_submodules().unwrap().into_iter().filter(|p| p.is_proper()) {
            for c in Class::ALL {
                let n = m.ring().size();
                let arity = c.arity();
                let total = n.pow(arity as u32) * m.size();
                let least = (0..total).find_map(|t| {
                    let x = t % m.size();
                    let mut rest = t / m.size();
                    let mut s = vec![0; arity];
                    for i in (0..arity).rev() {
                        s[i] = rest % n;
                        rest /= n;
                    }
                    let w = Witness::new(s, x);
                    c.violates(&p, &w).then_some(w)
                });
                assert_eq!(c.decide(&p).unwrap().into_witness(), least, "{c} on {p:?}");
            }
        }
    }

    #[test]
    fn classical_prime_is_prime_on_finite_modules() {
        // every nonzero element of M/P has a maximal annihilator, and two
        // distinct maximal annihilators cannot coexist
        let mut checked = 0;
        for m in [rmod(12), z2z4(), Arc::clone(ternary_zero().module())] {
            for p in m.all_submodules().unwrap().into_iter().filter(|p| p.is_proper()) {
                if is_classical_prime(&p).unwrap().holds() {
                    assert!(is_prime(&p).unwrap().holds(), "{p:?}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 3);
    }

    #[test]
    fn report_chain_and_vacuity() {
        let r = ClassReport::new(&rmod(4).zero_submodule()).unwrap();
        assert!(r.holds(Class::ClassicalOneAbsorbingPrime));
        assert!(!r.holds(Class::ClassicalPrime));
        assert!(!r.vacuous());
        let f = ClassReport::new(&rmod(5).zero_submodule()).unwrap();
        assert!(f.vacuous());
        assert!(Class::ALL.iter().all(|&c| f.holds(c)));
    }

    #[test]
    fn oracles_agree_on_fixtures() {
        let caps = OracleCaps::default();
        let z4 = classical_1abs_oracles(&rmod(4).zero_submodule(), &caps).unwrap();
        assert_eq!(z4.len(), Characterization::ALL.len());
        assert!(z4.values().all(|o| *o == OracleOutcome::Holds), "{z4:?}");
        let t = classical_1abs_oracles(&ternary_zero(), &caps).unwrap();
        assert!(t.values().all(|o| *o == OracleOutcome::Fails), "{t:?}");
        let prime = classical_1abs_oracles(&sub(&rmod(8), &[2]), &caps).unwrap();
        assert!(prime.values().all(|o| *o == OracleOutcome::Holds));
    }

    #[test]
    fn oracles_skip_under_tight_budget() {
        let caps = OracleCaps {
            work_budget: 0,
            ..OracleCaps::default()
        };
        let o = classical_1abs_oracles(&rmod(8).zero_submodule(), &caps).unwrap();
        assert!(matches!(o[&Characterization::IdealTriple], OracleOutcome::Skipped(_)));
        assert_eq!(o[&Characterization::ResidualUnion], OracleOutcome::Fails);
    }

    #[test]
    fn residual_unions() {
        let z4 = rmod(4);
        let u = residual_union_decomposition(&z4.zero_submodule(), 2, 2, 2, 1).unwrap();
        assert_eq!(u.side, UnionSide::Abm);
        assert!(!u.abcm.is_proper());
        let z8 = rmod(8);
        let p = sub(&z8, &[4]);
        let u = residual_union_decomposition(&p, 2, 2, 2, 1).unwrap();
        assert_eq!(*u.abcm.members(), u.abm.members().union(u.cm.members()));
        let u = residual_union_decomposition(&p, 2, 2, 2, 4).unwrap();
        assert_eq!(u.side, UnionSide::Both);
        assert!(residual_union_decomposition(&p, 1, 2, 2, 1).is_err());
        assert!(residual_union_decomposition(&z8.zero_submodule(), 2, 2, 2, 1).is_err());
    }

    #[test]
    fn minimal_primes() {
        let z8 = rmod(8);
        // {0} fails at (2,2,2;1), <4> is the least classical 1-absorbing prime
        assert_eq!(minimal_classical_1abs_primes(&z8).unwrap(), vec![sub(&z8, &[4])]);
        let pm = ProductModule::new(&[rmod(2), rmod(3)]).unwrap();
        // {0} fails at ((1,0),(1,0),(0,1);(1,1)); the two maximal ideals remain
        let mins = minimal_classical_1abs_primes(pm.module()).unwrap();
        let members: Vec<Vec<usize>> = mins.iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(members, vec![vec![0, 3], vec![0, 1, 2]]);
    }

    #[test]
    fn m_closed_and_krull() {
        let z4 = rmod(4);
        let s = z4.zero_submodule().members().complement();
        assert!(is_c1ap_m_closed(&z4, &s).unwrap().holds());
        assert!(is_c1ap_m_closed(&z4, &Bits::empty(4)).unwrap().holds());

        let z8 = rmod(8);
        let s8 = z8.zero_submodule().members().complement();
        let d = is_c1ap_m_closed(&z8, &s8).unwrap();
        assert!(!d.holds());
        assert!(matches!(krull_maximal_disjoint(&z8, &s8), Err(Error::NotMClosed(_))));

        let two = sub(&z4, &[2]);
        let p = krull_maximal_disjoint(&z4, &two.members().complement()).unwrap();
        assert_eq!(p, two);
        assert_eq!(krull_maximal_disjoint(&z4, &s).unwrap(), z4.zero_submodule());
        let p8 = sub(&z8, &[2]);
        assert_eq!(krull_maximal_disjoint(&z8, &p8.members().complement()).unwrap(), p8);
        assert!(krull_maximal_disjoint(&z4, &Bits::empty(4)).is_err());
        assert!(is_c1ap_m_closed(&z4, &Bits::full(4)).is_err());
        assert!(matches!(
            is_c1ap_m_closed(&rmod(32), &Bits::empty(32)),
            Err(Error::TooLarge { .. })
        ));
    }
}
