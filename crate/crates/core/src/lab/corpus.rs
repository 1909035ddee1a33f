//! Deterministic corpus of rings, modules and constructions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::classify::{
    c1ap_sweep_factor, classical_1abs_oracles, Characterization, Class, OracleCaps, OracleOutcome, Witness,
};
use crate::construct::{direct_sum, AmalgamModule, AmalgamRing, ProductModule};
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::module::{FiniteModule, ModuleHom, Submodule};
use crate::ring::{FiniteRing, Ideal};

/// Which module recipes are generated for each catalog ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Recipes {
    pub ring_as_module: bool,
    /// `A/I` for every proper nonzero ideal.
    pub quotients: bool,
    /// `A/I ⊕ A/J` (with `A/0 = A`) over rings no larger than `caps.max_direct_sum_ring`.
    pub direct_sums: bool,
    /// Products of factor modules over the binary and ternary product rings.
    pub products: bool,
    /// Ranks `k` of the free modules `A^k ⊗ M ≅ M^k`.
    pub free_tensors: Vec<usize>,
    /// `M ⋈ I` for every recipe module `M` of the amalgam's base ring.
    pub amalgam_modules: bool,
    /// Pinned fixtures: the ternary sum over Z12 and `Z2 ⊕ Z9` over Z18.
    pub fixtures: bool,
}

impl Default for Recipes {
    fn default() -> Self {
        Recipes {
            ring_as_module: true,
            quotients: true,
            direct_sums: true,
            products: true,
            free_tensors: vec![2, 3],
            amalgam_modules: true,
            fixtures: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_ring: usize,
    pub max_module: usize,
    pub max_submodules: usize,
    pub max_amalgam_module: usize,
    pub max_tensor_module: usize,
    pub max_direct_sum_ring: usize,
    pub mclosed_module: usize,
    pub mclosed_ideals: usize,
    /// Work budget for each ideal- or submodule-quantified characterization.
    pub oracle_work: u64,
    /// Work budget for quotient and tensor sweeps of one module.
    pub sweep_work: u64,
    pub max_chains: usize,
    /// Modules up to this size try every nonempty subset of `M ∖ {0}` as `S`.
    pub krull_exhaustive_up_to: usize,
    /// Largest `|M|²` for which the injection `M → M ⊕ M` is used as a test map.
    pub max_injection_target: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ring: 64,
            max_module: 144,
            max_submodules: 512,
            max_amalgam_module: 256,
            max_tensor_module: 4096,
            max_direct_sum_ring: 16,
            mclosed_module: 16,
            mclosed_ideals: 16,
            oracle_work: 4_000_000,
            sweep_work: 400_000_000,
            max_chains: 10_000,
            krull_exhaustive_up_to: 8,
            max_injection_target: 64,
        }
    }
}

impl Caps {
    pub fn oracle_caps(&self) -> OracleCaps {
        OracleCaps {
            work_budget: self.oracle_work,
            max_module: self.max_amalgam_module.max(self.max_module),
            max_submodules: self.max_submodules,
        }
    }
}

/// `A ⋈ I` for `A = Z_n` and `I = ⟨g⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamSpec {
    pub n: usize,
    pub gen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub zmods: Vec<usize>,
    /// Binary product rings `Z_a × Z_b`.
    pub products: Vec<[usize; 2]>,
    /// Ternary product rings, used for product modules only.
    pub ternary_products: Vec<[usize; 3]>,
    pub amalgams: Vec<AmalgamSpec>,
    pub recipes: Recipes,
    pub caps: Caps,
    pub seed: u64,
    /// Keep only this many modules, chosen with the seeded generator.
    pub sample: Option<usize>,
    /// Theorem ids to run; empty means all.
    pub theorems: Vec<String>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            zmods: vec![2, 3, 4, 6, 8, 9, 12],
            products: vec![[2, 3], [4, 4]],
            ternary_products: vec![[2, 3, 4]],
            amalgams: vec![
                AmalgamSpec { n: 4, gen: 2 },
                AmalgamSpec { n: 8, gen: 2 },
                AmalgamSpec { n: 8, gen: 4 },
                AmalgamSpec { n: 6, gen: 2 },
            ],
            recipes: Recipes::default(),
            caps: Caps::default(),
            seed: 0,
            sample: None,
            theorems: Vec::new(),
        }
    }
}

impl CorpusConfig {
    /// No rings, no fixtures.
    pub fn empty() -> Self {
        CorpusConfig {
            zmods: Vec::new(),
            products: Vec::new(),
            ternary_products: Vec::new(),
            amalgams: Vec::new(),
            recipes: Recipes {
                fixtures: false,
                ..Recipes::default()
            },
            ..CorpusConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        let sizes = [
            ("max_ring", c.max_ring),
            ("max_module", c.max_module),
            ("max_submodules", c.max_submodules),
            ("max_amalgam_module", c.max_amalgam_module),
            ("max_tensor_module", c.max_tensor_module),
            ("max_direct_sum_ring", c.max_direct_sum_ring),
            ("mclosed_module", c.mclosed_module),
            ("mclosed_ideals", c.mclosed_ideals),
            ("max_chains", c.max_chains),
            ("krull_exhaustive_up_to", c.krull_exhaustive_up_to),
            ("max_injection_target", c.max_injection_target),
        ];
        if let Some((name, _)) = sizes.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("cap {name} must be positive")));
        }
        if c.oracle_work == 0 || c.sweep_work == 0 {
            return Err(Error::InvalidArgument("work budgets must be positive".into()));
        }
        if self.zmods.iter().chain(self.products.iter().flatten()).any(|&n| n == 0)
            || self.ternary_products.iter().flatten().any(|&n| n == 0)
        {
            return Err(Error::InvalidArgument("Z_0 is not a finite ring".into()));
        }
        if self.recipes.free_tensors.contains(&0) {
            return Err(Error::InvalidArgument("free rank must be at least 1".into()));
        }
        if self.sample == Some(0) {
            return Err(Error::InvalidArgument("sample size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum RingKind {
    Zmod(usize),
    Product(Vec<usize>),
    Amalgam(Arc<AmalgamRing>),
}

#[derive(Debug, Clone)]
pub struct RingEntry {
    pub label: String,
    pub ring: Arc<FiniteRing>,
    pub kind: RingKind,
    /// Catalog rings get the general recipes; others carry only products or fixtures.
    pub catalog: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    RingAsModule,
    Quotient,
    DirectSum,
    Product,
    Amalgam,
    Fixture,
}

#[derive(Debug, Clone)]
pub enum Structure {
    Plain,
    Product(Arc<ProductModule>),
    /// `base` is the index of the module entry `M` with `M ⋈ I` = this entry.
    Amalgam {
        base: usize,
        amalgam: Arc<AmalgamModule>,
    },
}

/// All six flags for one proper submodule.
#[derive(Debug, Clone)]
pub struct Classified {
    pub sub: Submodule,
    pub flags: [Decision<Witness>; 6],
}

pub fn class_index(c: Class) -> usize {
    Class::ALL.iter().position(|&x| x == c).expect("listed class")
}

impl Classified {
    pub fn of(sub: &Submodule) -> Result<Self> {
        let mut flags: Vec<Decision<Witness>> = Vec::with_capacity(6);
        for c in Class::ALL {
            flags.push(c.decide(sub)?);
        }
        Ok(Classified {
            sub: sub.clone(),
            flags: flags.try_into().expect("six classes"),
        })
    }

    pub fn holds(&self, c: Class) -> bool {
        self.flags[class_index(c)].holds()
    }

    pub fn witness(&self, c: Class) -> Option<&Witness> {
        self.flags[class_index(c)].witness()
    }
}

pub type OracleMap = BTreeMap<Characterization, OracleOutcome>;

/// `M/L` for a proper nonzero `L`, with the projection and the classical
/// 1-absorbing verdict for every proper submodule of the quotient.
#[derive(Debug)]
pub struct QuotientData {
    pub kernel: Submodule,
    pub projection: ModuleHom,
    /// Submodules of `M/L` in canonical order; `None` for the whole quotient.
    pub lattice: Vec<(Submodule, Option<Decision<Witness>>)>,
}

impl QuotientData {
    pub fn module(&self) -> &Arc<FiniteModule> {
        self.projection.target()
    }

    /// Verdict for a submodule of `M/L` given by its bitset.
    pub fn c1ap(&self, members: &Bits) -> Option<&Decision<Witness>> {
        self.lattice
            .iter()
            .find(|(s, _)| s.members() == members)
            .and_then(|(_, d)| d.as_ref())
    }
}

/// A module of the corpus with lazily cached lattice, flags and oracles.
#[derive(Debug)]
pub struct ModuleEntry {
    pub label: String,
    pub ring: usize,
    pub module: Arc<FiniteModule>,
    pub recipe: Recipe,
    pub structure: Structure,
    lattice: OnceLock<std::result::Result<Vec<Submodule>, String>>,
    classified: OnceLock<std::result::Result<Vec<Classified>, String>>,
    positions: OnceLock<HashMap<Bits, usize>>,
    oracles: OnceLock<std::result::Result<Vec<OracleMap>, String>>,
    quotients: OnceLock<std::result::Result<Vec<QuotientData>, String>>,
}

impl ModuleEntry {
    fn new(label: String, ring: usize, module: Arc<FiniteModule>, recipe: Recipe, structure: Structure) -> Self {
        ModuleEntry {
            label,
            ring,
            module,
            recipe,
            structure,
            lattice: OnceLock::new(),
            classified: OnceLock::new(),
            positions: OnceLock::new(),
            oracles: OnceLock::new(),
            quotients: OnceLock::new(),
        }
    }

    /// Every submodule including `M`, in canonical order.
    pub fn lattice(&self, caps: &Caps) -> std::result::Result<&[Submodule], String> {
        self.lattice
            .get_or_init(|| {
                self.module
                    .all_submodules_capped(usize::MAX, caps.max_submodules)
                    .map_err(|e| e.to_string())
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Flags of every proper submodule, in lattice order.
    pub fn classified(&self, caps: &Caps) -> std::result::Result<&[Classified], String> {
        self.classified
            .get_or_init(|| {
                let lattice = self.lattice(caps)?;
                lattice
                    .iter()
                    .filter(|s| s.is_proper())
                    .map(|s| Classified::of(s).map_err(|e| e.to_string()))
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Position in [`classified`](Self::classified) of a proper submodule's bitset.
    pub fn position(&self, caps: &Caps, members: &Bits) -> Option<usize> {
        let classified = self.classified(caps).ok()?;
        self.positions
            .get_or_init(|| {
                classified
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.sub.members().clone(), i))
                    .collect()
            })
            .get(members)
            .copied()
    }

    /// Oracle maps, parallel to [`classified`](Self::classified).
    pub fn oracles(&self, caps: &Caps) -> std::result::Result<&[OracleMap], String> {
        self.oracles
            .get_or_init(|| {
                let oc = caps.oracle_caps();
                self.classified(caps)?
                    .iter()
                    .map(|c| classical_1abs_oracles(&c.sub, &oc).map_err(|e| e.to_string()))
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Quotients by every proper nonzero submodule, or the reason they were
    /// not built.
    pub fn quotients(&self, caps: &Caps) -> std::result::Result<&[QuotientData], String> {
        self.quotients
            .get_or_init(|| {
                let lattice = self.lattice(caps)?;
                let factor = c1ap_sweep_factor(self.module.ring());
                let n = self.module.size() as u64;
                let mut work = 0u64;
                for l in lattice.iter().filter(|l| l.is_proper() && l.len() > 1) {
                    let above = lattice.iter().filter(|k| l.is_subset(k)).count() as u64;
                    work = work.saturating_add(above * factor * (n / l.len() as u64));
                }
                if work > caps.sweep_work {
                    return Err(format!(
                        "quotient sweep work {work} exceeds sweep_work {}",
                        caps.sweep_work
                    ));
                }
                let mut out = Vec::new();
                for l in lattice.iter().filter(|l| l.is_proper() && l.len() > 1) {
                    let (q, projection) = self.module.quotient(l).map_err(|e| e.to_string())?;
                    let subs = q
                        .all_submodules_capped(usize::MAX, caps.max_submodules)
                        .map_err(|e| e.to_string())?;
                    let mut lat = Vec::with_capacity(subs.len());
                    for s in subs {
                        let d = if s.is_proper() {
                            Some(
                                Class::ClassicalOneAbsorbingPrime
                                    .decide(&s)
                                    .map_err(|e| e.to_string())?,
                            )
                        } else {
                            None
                        };
                        lat.push((s, d));
                    }
                    out.push(QuotientData {
                        kernel: l.clone(),
                        projection,
                        lattice: lat,
                    });
                }
                Ok(out)
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn instance(&self, what: &str) -> String {
        format!("{} | {}", self.label, what)
    }
}

/// `M^k` for a module entry, built on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpec {
    pub base: usize,
    pub rank: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedInstance {
    pub label: String,
    pub reason: String,
}

#[derive(Debug)]
pub struct Corpus {
    pub config: CorpusConfig,
    pub rings: Vec<RingEntry>,
    pub modules: Vec<ModuleEntry>,
    pub tensors: Vec<TensorSpec>,
    pub skipped: Vec<SkippedInstance>,
    pub sampled: bool,
}

struct Builder {
    caps: Caps,
    rings: Vec<RingEntry>,
    modules: Vec<ModuleEntry>,
    skipped: Vec<SkippedInstance>,
}

impl Builder {
    fn skip(&mut self, label: String, reason: impl ToString) {
        self.skipped.push(SkippedInstance {
            label,
            reason: reason.to_string(),
        });
    }

    fn ring_index(&mut self, ring: &Arc<FiniteRing>, kind: RingKind) -> usize {
        if let Some(i) = self.rings.iter().position(|r| *r.ring == **ring) {
            return i;
        }
        self.rings.push(RingEntry {
            label: ring.label().to_string(),
            ring: Arc::clone(ring),
            kind,
            catalog: false,
        });
        self.rings.len() - 1
    }

    fn add_ring(&mut self, ring: FiniteRing, kind: RingKind) {
        let label = ring.label().to_string();
        if ring.size() > self.caps.max_ring {
            self.skip(
                label,
                format!("ring size {} exceeds max_ring {}", ring.size(), self.caps.max_ring),
            );
            return;
        }
        if self.rings.iter().any(|r| r.label == label) {
            return;
        }
        self.rings.push(RingEntry {
            label,
            ring: Arc::new(ring),
            kind,
            catalog: true,
        });
    }

    /// Adds a module unless it breaks `cap`; returns its index.
    fn add_module(
        &mut self,
        ring: usize,
        module: Arc<FiniteModule>,
        recipe: Recipe,
        structure: Structure,
        cap: usize,
    ) -> Option<usize> {
        let mut label = format!("{} | {}", self.rings[ring].label, module.label());
        if self.modules.iter().any(|m| m.label == label) {
            let n = self.modules.iter().filter(|m| m.label.starts_with(&label)).count();
            label = format!("{label} #{}", n + 1);
        }
        if module.size() > cap {
            self.skip(label, format!("module size {} exceeds cap {cap}", module.size()));
            return None;
        }
        self.modules
            .push(ModuleEntry::new(label, ring, module, recipe, structure));
        Some(self.modules.len() - 1)
    }

    /// Ring-as-module and quotients `A/I` of one ring, as modules.
    fn cyclic_modules(ring: &Arc<FiniteRing>, quotients: bool) -> Result<Vec<(Arc<FiniteModule>, Recipe)>> {
        let a = Arc::new(FiniteModule::ring_as_module(ring));
        let mut out = vec![(Arc::clone(&a), Recipe::RingAsModule)];
        if quotients {
            for ideal in ring.ideals()? {
                if ideal.is_proper() && ideal.len() > 1 {
                    let l = Submodule::from_bits(&a, ideal.members().clone())?;
                    out.push((a.quotient(&l)?.0, Recipe::Quotient));
                }
            }
        }
        Ok(out)
    }

    fn general_recipes(&mut self, ri: usize, recipes: &Recipes) {
        let ring = Arc::clone(&self.rings[ri].ring);
        let cyclic = match Self::cyclic_modules(&ring, recipes.quotients) {
            Ok(c) => c,
            Err(e) => {
                self.skip(self.rings[ri].label.clone(), e);
                return;
            }
        };
        for (m, recipe) in &cyclic {
            if *recipe == Recipe::RingAsModule && !recipes.ring_as_module {
                continue;
            }
            self.add_module(ri, Arc::clone(m), *recipe, Structure::Plain, self.caps.max_module);
        }
        if recipes.direct_sums && ring.size() <= self.caps.max_direct_sum_ring {
            for i in 0..cyclic.len() {
                for j in i..cyclic.len() {
                    let (x, y) = (&cyclic[i].0, &cyclic[j].0);
                    let size = x.size() * y.size();
                    if size > self.caps.max_module {
                        self.skip(
                            format!("{} | {}+{}", self.rings[ri].label, x.label(), y.label()),
                            format!("module size {size} exceeds cap {}", self.caps.max_module),
                        );
                        continue;
                    }
                    match direct_sum(&[x, y]) {
                        Ok(s) => {
                            self.add_module(
                                ri,
                                Arc::new(s),
                                Recipe::DirectSum,
                                Structure::Plain,
                                self.caps.max_module,
                            );
                        }
                        Err(e) => self.skip(format!("{} | {}+{}", self.rings[ri].label, x.label(), y.label()), e),
                    }
                }
            }
        }
    }

    fn product_modules(&mut self, ns: &[usize], quotients: bool) {
        let mut factor_lists = Vec::new();
        for &n in ns {
            let r = match FiniteRing::zmod(n) {
                Ok(r) => Arc::new(r),
                Err(e) => return self.skip(format!("Z{n}"), e),
            };
            match Self::cyclic_modules(&r, quotients) {
                Ok(c) => factor_lists.push(c.into_iter().map(|(m, _)| m).collect::<Vec<_>>()),
                Err(e) => return self.skip(format!("Z{n}"), e),
            }
        }
        let mut idx = vec![0usize; ns.len()];
        loop {
            let factors: Vec<Arc<FiniteModule>> =
                idx.iter().zip(&factor_lists).map(|(&i, l)| Arc::clone(&l[i])).collect();
            let label = factors.iter().map(|f| f.label()).collect::<Vec<_>>().join("×");
            let size: usize = factors.iter().map(|f| f.size()).product();
            if size > self.caps.max_module {
                self.skip(
                    label,
                    format!("module size {size} exceeds cap {}", self.caps.max_module),
                );
            } else {
                match ProductModule::new(&factors) {
                    Ok(p) => {
                        let p = p.with_label(label);
                        let module = Arc::clone(p.module());
                        let ri = self.ring_index(module.ring(), RingKind::Product(ns.to_vec()));
                        self.add_module(
                            ri,
                            module,
                            Recipe::Product,
                            Structure::Product(Arc::new(p)),
                            self.caps.max_module,
                        );
                    }
                    Err(e) => self.skip(label, e),
                }
            }
            // Odometer over factor choices.
            let mut k = ns.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < factor_lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn fixtures(&mut self) -> Result<()> {
        let z12 = Arc::new(FiniteRing::zmod(12)?);
        let a = Arc::new(FiniteModule::ring_as_module(&z12));
        let (z2, _) = a.quotient(&Submodule::generated(&a, &[2])?)?;
        let (z3, _) = a.quotient(&Submodule::generated(&a, &[3])?)?;
        let ex2 = direct_sum(&[&z2, &z3, &a])?;
        let ri = self.ring_index(&z12, RingKind::Zmod(12));
        self.add_module(ri, Arc::new(ex2), Recipe::Fixture, Structure::Plain, usize::MAX);

        let z18 = Arc::new(FiniteRing::zmod(18)?);
        let b = Arc::new(FiniteModule::ring_as_module(&z18));
        let (y2, _) = b.quotient(&Submodule::generated(&b, &[2])?)?;
        let (y9, _) = b.quotient(&Submodule::generated(&b, &[9])?)?;
        let s = direct_sum(&[&y2, &y9])?;
        let ri = self.ring_index(&z18, RingKind::Zmod(18));
        self.add_module(ri, Arc::new(s), Recipe::Fixture, Structure::Plain, usize::MAX);
        Ok(())
    }

    fn amalgam_modules(&mut self, ri: usize, amalgam: &Arc<AmalgamRing>) {
        let base_ring = amalgam.base();
        let bases: Vec<usize> = (0..self.modules.len())
            .filter(|&i| {
                let e = &self.modules[i];
                *self.rings[e.ring].ring == **base_ring
                    && self.rings[e.ring].catalog
                    && matches!(e.recipe, Recipe::RingAsModule | Recipe::Quotient | Recipe::DirectSum)
            })
            .collect();
        for b in bases {
            let base = Arc::clone(&self.modules[b].module);
            let im = match amalgam.ideal().times(&base.whole()) {
                Ok(im) => im,
                Err(e) => {
                    self.skip(self.modules[b].label.clone(), e);
                    continue;
                }
            };
            let size = base.size() * im.len();
            let label = format!(
                "{} | {}⋈{}",
                self.rings[ri].label,
                base.label(),
                amalgam.ideal().short_name()
            );
            if size > self.caps.max_amalgam_module {
                self.skip(
                    label,
                    format!(
                        "module size {size} exceeds max_amalgam_module {}",
                        self.caps.max_amalgam_module
                    ),
                );
                continue;
            }
            match AmalgamModule::new(&base, amalgam.ideal()) {
                Ok(am) => {
                    let module = Arc::clone(am.module());
                    self.add_module(
                        ri,
                        module,
                        Recipe::Amalgam,
                        Structure::Amalgam {
                            base: b,
                            amalgam: Arc::new(am),
                        },
                        usize::MAX,
                    );
                }
                Err(e) => self.skip(label, e),
            }
        }
    }
}

impl Corpus {
    pub fn generate(config: &CorpusConfig) -> Result<Corpus> {
        config.validate()?;
        let caps = config.caps.clone();
        let mut b = Builder {
            caps: caps.clone(),
            rings: Vec::new(),
            modules: Vec::new(),
            skipped: Vec::new(),
        };
        for &n in &config.zmods {
            b.add_ring(FiniteRing::zmod(n)?, RingKind::Zmod(n));
        }
        for &[x, y] in &config.products {
            let r = FiniteRing::product(&FiniteRing::zmod(x)?, &FiniteRing::zmod(y)?);
            b.add_ring(r, RingKind::Product(vec![x, y]));
        }
        let mut amalgams = Vec::new();
        for spec in &config.amalgams {
            let base = Arc::new(FiniteRing::zmod(spec.n)?);
            let ideal = Ideal::generated(&base, &[spec.gen % spec.n])?;
            let am = Arc::new(AmalgamRing::new(&ideal));
            let before = b.rings.len();
            b.add_ring((**am.ring()).clone(), RingKind::Amalgam(Arc::clone(&am)));
            if b.rings.len() > before {
                amalgams.push((b.rings.len() - 1, am));
            }
        }
        let catalog: Vec<usize> = (0..b.rings.len()).collect();
        for &ri in &catalog {
            b.general_recipes(ri, &config.recipes);
        }
        if config.recipes.products {
            for &[x, y] in &config.products {
                b.product_modules(&[x, y], config.recipes.quotients);
            }
            for t in &config.ternary_products {
                b.product_modules(t, config.recipes.quotients);
            }
        }
        if config.recipes.fixtures {
            b.fixtures()?;
        }
        if config.recipes.amalgam_modules {
            for (ri, am) in &amalgams {
                if !config.zmods.contains(&am.base().size()) {
                    b.skip(
                        b.rings[*ri].label.clone(),
                        "amalgam modules need the base ring in the catalog",
                    );
                    continue;
                }
                b.amalgam_modules(*ri, am);
            }
        }

        let mut sampled = false;
        if let Some(k) = config.sample {
            if k < b.modules.len() {
                sampled = true;
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                let mut keep = sample(&mut rng, b.modules.len(), k).into_vec();
                // Amalgam entries need their base entry.
                for &i in keep.clone().iter() {
                    if let Structure::Amalgam { base, .. } = b.modules[i].structure {
                        if !keep.contains(&base) {
                            keep.push(base);
                        }
                    }
                }
                keep.sort_unstable();
                let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
                let old = std::mem::take(&mut b.modules);
                for (i, mut e) in old.into_iter().enumerate() {
                    if !remap.contains_key(&i) {
                        b.skipped.push(SkippedInstance {
                            label: e.label,
                            reason: "not in the seeded sample".into(),
                        });
                        continue;
                    }
                    if let Structure::Amalgam { base, .. } = &mut e.structure {
                        *base = remap[base];
                    }
                    b.modules.push(e);
                }
            }
        }

        let mut tensors = Vec::new();
        for (i, e) in b.modules.iter().enumerate() {
            for &k in &config.recipes.free_tensors {
                if k < 2 {
                    continue;
                }
                let label = format!("{}^{k}", e.label);
                match e.module.size().checked_pow(k as u32) {
                    Some(s) if s <= caps.max_tensor_module => tensors.push(TensorSpec {
                        base: i,
                        rank: k,
                        label,
                    }),
                    _ => b.skipped.push(SkippedInstance {
                        label,
                        reason: format!("|M|^{k} exceeds max_tensor_module {}", caps.max_tensor_module),
                    }),
                }
            }
        }

        Ok(Corpus {
            config: config.clone(),
            rings: b.rings,
            modules: b.modules,
            tensors,
            skipped: b.skipped,
            sampled,
        })
    }

    pub fn caps(&self) -> &Caps {
        &self.config.caps
    }

    /// Module entries over ring `ri`, ring-as-module first, then generation order.
    pub fn modules_over(&self, ri: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.modules.len())
            .filter(|&i| self.modules[i].ring == ri)
            .collect();
        idx.sort_by_key(|&i| (self.modules[i].recipe != Recipe::RingAsModule, i));
        idx
    }

    pub fn find_module(&self, label: &str) -> Option<usize> {
        self.modules.iter().position(|m| m.label == label)
    }

    pub fn find_ring(&self, label: &str) -> Option<usize> {
        self.rings.iter().position(|r| r.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog() {
        let c = Corpus::generate(&CorpusConfig::default()).unwrap();
        let rings: Vec<&str> = c.rings.iter().filter(|r| r.catalog).map(|r| r.label.as_str()).collect();
        for want in [
            "Z2", "Z3", "Z4", "Z6", "Z8", "Z9", "Z12", "Z2xZ3", "Z4xZ4", "Z4⋈<2>", "Z8⋈<2>", "Z8⋈<4>", "Z6⋈<2>",
        ] {
            assert!(rings.contains(&want), "{want}");
        }
        let z4 = c.find_module("Z4 | Z4").unwrap();
        let lattice = c.modules[z4].lattice(c.caps()).unwrap();
        assert!(lattice.iter().any(|s| s.len() == 1));
        assert!(c.find_module("Z12 | Z12/<2>+Z12/<3>+Z12").is_some());
        assert!(c.modules.iter().all(|m| m.module.size() <= c.caps().max_amalgam_module));
        assert!(c
            .modules
            .iter()
            .any(|m| matches!(m.structure, Structure::Amalgam { .. })));
        assert!(c
            .modules
            .iter()
            .any(|m| matches!(&m.structure, Structure::Product(p) if p.factors().len() == 3)));
        assert!(c
            .tensors
            .iter()
            .all(|t| c.modules[t.base].module.size().pow(t.rank as u32) <= 4096));
        assert!(!c.sampled);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = Corpus::generate(&CorpusConfig::default()).unwrap();
        let b = Corpus::generate(&CorpusConfig::default()).unwrap();
        let labels = |c: &Corpus| c.modules.iter().map(|m| m.label.clone()).collect::<Vec<_>>();
        assert_eq!(labels(&a), labels(&b));
        let unique: std::collections::BTreeSet<String> = labels(&a).into_iter().collect();
        assert_eq!(unique.len(), a.modules.len());
    }

    #[test]
    fn empty_config_gives_empty_corpus() {
        let c = Corpus::generate(&CorpusConfig::empty()).unwrap();
        assert!(c.rings.is_empty() && c.modules.is_empty() && c.tensors.is_empty());
    }

    #[test]
    fn config_validation() {
        let mut c = CorpusConfig::default();
        c.caps.max_module = 0;
        assert!(c.validate().is_err());
        let mut c = CorpusConfig::default();
        c.zmods.push(0);
        assert!(c.validate().is_err());
        let c = CorpusConfig {
            sample: Some(0),
            ..CorpusConfig::default()
        };
        assert!(c.validate().is_err());
        assert!(Corpus::generate(&c).is_err());
        let parsed: CorpusConfig = serde_json::from_str(r#"{"zmods": [4], "caps": {"max_module": 8}}"#).unwrap();
        assert_eq!(parsed.zmods, [4]);
        assert_eq!(parsed.caps.max_submodules, Caps::default().max_submodules);
        assert!(serde_json::from_str::<CorpusConfig>(r#"{"zmod": [4]}"#).is_err());
    }

    #[test]
    fn module_cap_skips_with_reason() {
        let mut cfg = CorpusConfig::empty();
        cfg.zmods = vec![8];
        cfg.caps.max_module = 4;
        let c = Corpus::generate(&cfg).unwrap();
        assert!(c.modules.iter().all(|m| m.module.size() <= 4));
        assert!(c
            .skipped
            .iter()
            .any(|s| s.label == "Z8 | Z8" && s.reason == "module size 8 exceeds cap 4"));
    }

    #[test]
    fn sampling_is_seeded() {
        let cfg = CorpusConfig {
            sample: Some(10),
            seed: 7,
            ..CorpusConfig::default()
        };
        let a = Corpus::generate(&cfg).unwrap();
        let b = Corpus::generate(&cfg).unwrap();
        assert!(a.sampled);
        let labels = |c: &Corpus| c.modules.iter().map(|m| m.label.clone()).collect::<Vec<_>>();
        assert_eq!(labels(&a), labels(&b));
        for m in &a.modules {
            if let Structure::Amalgam { base, .. } = m.structure {
                assert!(base < a.modules.len());
            }
        }
    }

    #[test]
    fn cached_classification_matches_direct() {
        let mut cfg = CorpusConfig::empty();
        cfg.zmods = vec![12];
        let c = Corpus::generate(&cfg).unwrap();
        let e = &c.modules[c.find_module("Z12 | Z12").unwrap()];
        let cl = e.classified(c.caps()).unwrap();
        assert_eq!(cl.len(), 5);
        for x in cl {
            for class in Class::ALL {
                assert_eq!(x.holds(class), class.decide(&x.sub).unwrap().holds());
            }
            assert_eq!(e.position(c.caps(), x.sub.members()).map(|i| &cl[i].sub), Some(&x.sub));
        }
        assert_eq!(e.position(c.caps(), e.module.whole().members()), None);
    }
}
