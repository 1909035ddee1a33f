//! Finite modules over a [`FiniteRing`], their submodules, residuals
//! (colon objects), homomorphisms and quotients.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::ring::{Axiom, Diagnostic, FiniteRing, Ideal};

/// Largest module for which generated submodules are computed.
pub const MAX_GENERATE: usize = 4096;
/// Largest module whose full submodule lattice is enumerated.
pub const MAX_ALL_SUBMODULES: usize = 512;
/// Bound on pairwise-sum steps during lattice closure.
pub const MAX_CLOSURE_STEPS: usize = 1 << 20;

#[derive(Clone)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    label: String,
    size: usize,
    add: Vec<u32>,
    act: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    names: Vec<String>,
    lattice: OnceLock<Vec<Bits>>,
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.add == other.add
            && self.act == other.act
            && *self.ring == *other.ring
    }
}

impl Eq for FiniteModule {}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteModule")
            .field("label", &self.label)
            .field("ring", &self.ring.label())
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteModule {
    /// `add` is `size × size` row-major; `action` is `|ring| × size`, row `a`
    /// holding `a·m`. Shape and ranges are checked; axioms are left to
    /// [`validate`](FiniteModule::validate).
    pub fn from_tables(
        label: impl Into<String>,
        ring: Arc<FiniteRing>,
        size: usize,
        add: Vec<usize>,
        action: Vec<usize>,
        zero: usize,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("module carrier must be nonempty".into()));
        }
        if add.len() != size * size {
            return Err(Error::Shape(format!(
                "add table has {} cells, expected {}",
                add.len(),
                size * size
            )));
        }
        if action.len() != ring.size() * size {
            return Err(Error::Shape(format!(
                "action table has {} cells, expected {}",
                action.len(),
                ring.size() * size
            )));
        }
        if let Some(&bad) = add.iter().chain(&action).find(|&&x| x >= size) {
            return Err(Error::OutOfRange { index: bad, size });
        }
        if zero >= size {
            return Err(Error::OutOfRange { index: zero, size });
        }
        let names = match names {
            Some(n) if n.len() == size => n,
            Some(n) => return Err(Error::Shape(format!("{} element names for {} elements", n.len(), size))),
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&x| add[a * size + x] == zero)
                    .map_or(u32::MAX, |x| x as u32)
            })
            .collect();
        Ok(FiniteModule {
            ring,
            label: label.into(),
            size,
            add: add.into_iter().map(|x| x as u32).collect(),
            act: action.into_iter().map(|x| x as u32).collect(),
            neg,
            zero,
            names,
            lattice: OnceLock::new(),
        })
    }

    /// The ring regarded as a module over itself.
    pub fn ring_as_module(ring: &Arc<FiniteRing>) -> Self {
        Self::from_tables(
            ring.label(),
            Arc::clone(ring),
            ring.size(),
            ring.add_table(),
            ring.mul_table(),
            ring.zero(),
            Some(ring.names().to_vec()),
        )
        .expect("ring tables are well shaped")
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub(crate) fn set_names(&mut self, names: Vec<String>) {
        debug_assert_eq!(names.len(), self.size);
        self.names = names;
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    /// Scalar action `a·m`.
    #[inline]
    pub fn act(&self, a: usize, m: usize) -> usize {
        self.act[a * self.size + m] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    pub fn add_table(&self) -> Vec<usize> {
        self.add.iter().map(|&x| x as usize).collect()
    }

    pub fn action_table(&self) -> Vec<usize> {
        self.act.iter().map(|&x| x as usize).collect()
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.size;
        let r = &*self.ring;
        let k = r.size();
        let z = self.zero;
        let mut out = Vec::new();
        let mut push = |axiom, w: Option<Vec<usize>>| {
            if let Some(witness) = w {
                out.push(Diagnostic { axiom, witness });
            }
        };
        push(
            Axiom::AddIdentity,
            (0..n)
                .find(|&x| self.add(z, x) != x || self.add(x, z) != x)
                .map(|x| vec![x]),
        );
        push(
            Axiom::AddInverse,
            (0..n).find(|&x| self.neg[x] == u32::MAX).map(|x| vec![x]),
        );
        push(
            Axiom::AddCommutative,
            pairs(n, n)
                .find(|&(x, y)| self.add(x, y) != self.add(y, x))
                .map(|(x, y)| vec![x, y]),
        );
        push(
            Axiom::AddAssociative,
            triples(n, n, n)
                .find(|&(x, y, w)| self.add(self.add(x, y), w) != self.add(x, self.add(y, w)))
                .map(|(x, y, w)| vec![x, y, w]),
        );
        push(
            Axiom::ActionIdentity,
            (0..n).find(|&m| self.act(r.one(), m) != m).map(|m| vec![r.one(), m]),
        );
        push(
            Axiom::ActionAddScalars,
            triples(k, k, n)
                .find(|&(a, b, m)| self.act(r.add(a, b), m) != self.add(self.act(a, m), self.act(b, m)))
                .map(|(a, b, m)| vec![a, b, m]),
        );
        push(
            Axiom::ActionAddVectors,
            triples(k, n, n)
                .find(|&(a, x, y)| self.act(a, self.add(x, y)) != self.add(self.act(a, x), self.act(a, y)))
                .map(|(a, x, y)| vec![a, x, y]),
        );
        push(
            Axiom::ActionCompatible,
            triples(k, k, n)
                .find(|&(a, b, m)| self.act(r.mul(a, b), m) != self.act(a, self.act(b, m)))
                .map(|(a, b, m)| vec![a, b, m]),
        );
        out
    }

    pub fn check_size(&self, cap: usize) -> Result<()> {
        if self.size > cap {
            Err(Error::TooLarge {
                what: "module",
                size: self.size,
                cap,
            })
        } else {
            Ok(())
        }
    }

    /// Cyclic submodule `Am` as a bitset.
    pub(crate) fn cyclic_bits(&self, m: usize) -> Bits {
        Bits::from_indices(self.size, (0..self.ring.size()).map(|a| self.act(a, m)))
    }

    /// `S + Am` for a submodule bitset `s`, built coset by coset.
    pub(crate) fn add_cyclic(&self, s: &Bits, m: usize) -> Bits {
        let elems = s.to_vec();
        let mut out = s.clone();
        for a in 0..self.ring.size() {
            let c = self.act(a, m);
            if out.contains(c) {
                continue;
            }
            for &x in &elems {
                out.insert(self.add(x, c));
            }
        }
        out
    }

    pub(crate) fn sum_bits(&self, x: &Bits, y: &Bits) -> Bits {
        let xs = x.to_vec();
        let mut out = x.clone();
        for c in y.iter() {
            if out.contains(c) {
                continue;
            }
            for &a in &xs {
                out.insert(self.add(a, c));
            }
        }
        out
    }

    pub(crate) fn span_bits(&self, gens: impl IntoIterator<Item = usize>) -> Bits {
        let mut cur = Bits::from_indices(self.size, [self.zero]);
        for g in gens {
            if !cur.contains(g) {
                cur = self.add_cyclic(&cur, g);
            }
        }
        cur
    }

    /// Every submodule, sorted by (size, member order), using the default caps.
    pub fn all_submodules(self: &Arc<Self>) -> Result<Vec<Submodule>> {
        self.all_submodules_capped(MAX_ALL_SUBMODULES, usize::MAX)
    }

    pub fn all_submodules_capped(self: &Arc<Self>, max_size: usize, max_count: usize) -> Result<Vec<Submodule>> {
        Ok(self
            .lattice_bits(max_size, max_count)?
            .iter()
            .map(|b| Submodule {
                module: Arc::clone(self),
                members: b.clone(),
            })
            .collect())
    }

    /// Cached member bitsets of the submodule lattice.
    pub fn lattice_bits(&self, max_size: usize, max_count: usize) -> Result<&[Bits]> {
        self.check_size(max_size)?;
        if self.lattice.get().is_none() {
            let computed = self.enumerate_lattice()?;
            let _ = self.lattice.set(computed);
        }
        let all = self.lattice.get().expect("lattice initialised above");
        if all.len() > max_count {
            return Err(Error::TooLarge {
                what: "submodule lattice",
                size: all.len(),
                cap: max_count,
            });
        }
        Ok(all)
    }

    /// Closure of the cyclic submodules under sums.
    fn enumerate_lattice(&self) -> Result<Vec<Bits>> {
        let mut cyclic: Vec<(Bits, usize)> = Vec::new();
        let mut seen_cyclic = BTreeSet::new();
        for m in 0..self.size {
            let c = self.cyclic_bits(m);
            if seen_cyclic.insert(c.clone()) {
                cyclic.push((c, m));
            }
        }
        let mut seen: BTreeSet<Bits> = seen_cyclic;
        let mut work: Vec<Bits> = cyclic.iter().map(|(c, _)| c.clone()).collect();
        let mut steps = 0usize;
        while let Some(cur) = work.pop() {
            for (c, g) in &cyclic {
                if c.is_subset(&cur) {
                    continue;
                }
                steps += 1;
                if steps > MAX_CLOSURE_STEPS {
                    return Err(Error::ClosureBudget(MAX_CLOSURE_STEPS));
                }
                let s = self.add_cyclic(&cur, *g);
                if seen.insert(s.clone()) {
                    work.push(s);
                }
            }
        }
        let mut all: Vec<Bits> = seen.into_iter().collect();
        all.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    pub fn whole(self: &Arc<Self>) -> Submodule {
        Submodule {
            module: Arc::clone(self),
            members: Bits::full(self.size),
        }
    }

    pub fn zero_submodule(self: &Arc<Self>) -> Submodule {
        Submodule {
            module: Arc::clone(self),
            members: Bits::from_indices(self.size, [self.zero]),
        }
    }

    /// `ann(M) = (0 :_A M)`.
    pub fn annihilator(self: &Arc<Self>) -> Ideal {
        self.zero_submodule().residual_by_submodule(&self.whole())
    }

    /// Every submodule `N` satisfies `(N :_A M)M = N`.
    pub fn is_multiplication_module(self: &Arc<Self>) -> Result<bool> {
        let whole = self.whole();
        for n in self.all_submodules()? {
            let i = n.residual_by_submodule(&whole);
            if i.times(&whole)?.members != n.members {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `M / L` with the projection. Cosets are represented by their least
    /// element index and ordered by representative.
    pub fn quotient(self: &Arc<Self>, l: &Submodule) -> Result<(Arc<FiniteModule>, ModuleHom)> {
        l.check_module(self)?;
        let lv = l.members.to_vec();
        let rep: Vec<usize> = (0..self.size)
            .map(|x| lv.iter().map(|&y| self.add(x, y)).min().expect("L contains 0"))
            .collect();
        let reps: Vec<usize> = BTreeSet::from_iter(rep.iter().copied()).into_iter().collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &r) in reps.iter().enumerate() {
            index[r] = i;
        }
        let q = reps.len();
        let k = self.ring.size();
        let add = (0..q * q)
            .map(|c| index[rep[self.add(reps[c / q], reps[c % q])]])
            .collect();
        let action = (0..k * q).map(|c| index[rep[self.act(c / q, reps[c % q])]]).collect();
        let names = reps.iter().map(|&r| self.names[r].clone()).collect();
        let quotient = Arc::new(FiniteModule::from_tables(
            format!("{}/{}", self.label, l.short_name()),
            Arc::clone(&self.ring),
            q,
            add,
            action,
            index[rep[self.zero]],
            Some(names),
        )?);
        let map = (0..self.size).map(|x| index[rep[x]]).collect();
        let proj = ModuleHom {
            source: Arc::clone(self),
            target: Arc::clone(&quotient),
            map,
        };
        Ok((quotient, proj))
    }
}

fn pairs(n1: usize, n2: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n1).flat_map(move |a| (0..n2).map(move |b| (a, b)))
}

fn triples(n1: usize, n2: usize, n3: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n1).flat_map(move |a| (0..n2).flat_map(move |b| (0..n3).map(move |c| (a, b, c))))
}

/// A submodule, identified by its member bitset.
#[derive(Clone)]
pub struct Submodule {
    module: Arc<FiniteModule>,
    members: Bits,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && *self.module == *other.module
    }
}

impl Eq for Submodule {}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Submodule({}, {:?})", self.module.label, self.members)
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.members.iter().map(|m| self.module.name(m)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl Submodule {
    pub fn generated(module: &Arc<FiniteModule>, gens: &[usize]) -> Result<Submodule> {
        module.check_size(MAX_GENERATE)?;
        for &g in gens {
            if g >= module.size {
                return Err(Error::OutOfRange {
                    index: g,
                    size: module.size,
                });
            }
        }
        Ok(Submodule {
            module: Arc::clone(module),
            members: module.span_bits(gens.iter().copied()),
        })
    }

    pub(crate) fn from_bits_unchecked(module: &Arc<FiniteModule>, members: Bits) -> Submodule {
        debug_assert_eq!(members.len(), module.size);
        Submodule {
            module: Arc::clone(module),
            members,
        }
    }

    /// Checks closure under addition and the action before wrapping.
    pub fn from_bits(module: &Arc<FiniteModule>, members: Bits) -> Result<Submodule> {
        if members.len() != module.size {
            return Err(Error::Shape("submodule bitset length".into()));
        }
        let k = module.ring.size();
        let ok = members.contains(module.zero)
            && members
                .iter()
                .all(|x| members.iter().all(|y| members.contains(module.add(x, y))))
            && members
                .iter()
                .all(|x| (0..k).all(|a| members.contains(module.act(a, x))));
        if !ok {
            return Err(Error::InvalidArgument("bitset is not a submodule".into()));
        }
        Ok(Submodule::from_bits_unchecked(module, members))
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    pub fn members(&self) -> &Bits {
        &self.members
    }

    pub fn contains(&self, m: usize) -> bool {
        self.members.contains(m)
    }

    pub fn is_proper(&self) -> bool {
        !self.members.is_full()
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.members.is_subset(&other.members)
    }

    pub(crate) fn check_module(&self, module: &FiniteModule) -> Result<()> {
        if std::ptr::eq(&*self.module, module) || *self.module == *module {
            Ok(())
        } else {
            Err(Error::Mismatch("modules"))
        }
    }

    fn same_module(&self, other: &Submodule) -> Result<()> {
        other.check_module(&self.module)
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same_module(other)?;
        Ok(Submodule::from_bits_unchecked(
            &self.module,
            self.module.sum_bits(&self.members, &other.members),
        ))
    }

    pub fn intersection(&self, other: &Submodule) -> Result<Submodule> {
        self.same_module(other)?;
        Ok(Submodule::from_bits_unchecked(
            &self.module,
            self.members.intersection(&other.members),
        ))
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut span = Bits::from_indices(self.module.size, [self.module.zero]);
        let mut gens = Vec::new();
        for m in self.members.iter() {
            if !span.contains(m) {
                span = self.module.add_cyclic(&span, m);
                gens.push(m);
            }
        }
        gens
    }

    /// `0` or `<g1,g2,..>` using element names.
    pub fn short_name(&self) -> String {
        let gens = self.generators();
        if gens.is_empty() {
            "0".to_string()
        } else {
            let names: Vec<&str> = gens.iter().map(|&g| self.module.name(g)).collect();
            format!("<{}>", names.join(","))
        }
    }

    /// `(P :_M a) = {m : a·m ∈ P}`.
    pub fn residual_by_scalar(&self, a: usize) -> Submodule {
        let m = &self.module;
        Submodule::from_bits_unchecked(
            m,
            Bits::from_indices(m.size, (0..m.size).filter(|&x| self.contains(m.act(a, x)))),
        )
    }

    /// `(P :_A m) = {a : a·m ∈ P}`.
    pub fn residual_by_element(&self, x: usize) -> Ideal {
        let m = &self.module;
        let r = &m.ring;
        Ideal::from_bits_unchecked(
            r,
            Bits::from_indices(r.size(), (0..r.size()).filter(|&a| self.contains(m.act(a, x)))),
        )
    }

    /// `(P :_A L) = {a : aL ⊆ P}`.
    pub fn residual_by_submodule(&self, l: &Submodule) -> Ideal {
        let m = &self.module;
        let r = &m.ring;
        let gens = l.generators();
        Ideal::from_bits_unchecked(
            r,
            Bits::from_indices(
                r.size(),
                (0..r.size()).filter(|&a| gens.iter().all(|&g| self.contains(m.act(a, g)))),
            ),
        )
    }

    /// Proper submodules are the domain of every class predicate.
    pub fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::ImproperArgument("submodule"))
        }
    }
}

impl Ideal {
    /// `IL`, the submodule generated by `{a·x : a ∈ I, x ∈ L}`.
    pub fn times(&self, l: &Submodule) -> Result<Submodule> {
        let m = &l.module;
        if *self.ring().as_ref() != *m.ring {
            return Err(Error::Mismatch("rings"));
        }
        let xs = l.generators();
        let gens = self
            .elements()
            .into_iter()
            .flat_map(|a| xs.iter().map(move |&x| m.act(a, x)));
        Ok(Submodule::from_bits_unchecked(m, m.span_bits(gens)))
    }
}

/// Product `NK := (N :_A M)(K :_A M)M` of submodules of a multiplication module.
pub fn submodule_product(n: &Submodule, k: &Submodule) -> Result<Submodule> {
    n.same_module(k)?;
    let m = &n.module;
    if !m.is_multiplication_module()? {
        return Err(Error::NotMultiplication(m.label.clone()));
    }
    let whole = m.whole();
    let i = n.residual_by_submodule(&whole);
    let j = k.residual_by_submodule(&whole);
    i.product(&j)?.times(&whole)
}

/// A validated A-linear map between modules over the same ring.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    source: Arc<FiniteModule>,
    target: Arc<FiniteModule>,
    map: Vec<usize>,
}

impl ModuleHom {
    pub fn new(source: Arc<FiniteModule>, target: Arc<FiniteModule>, map: Vec<usize>) -> Result<Self> {
        if *source.ring != *target.ring {
            return Err(Error::Mismatch("rings"));
        }
        if map.len() != source.size {
            return Err(Error::Shape(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.size
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.size) {
            return Err(Error::OutOfRange {
                index: bad,
                size: target.size,
            });
        }
        let h = ModuleHom { source, target, map };
        h.check()?;
        Ok(h)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let f = &self.map;
        if f[s.zero] != t.zero {
            return Err(Error::NotHomomorphism("f(0) != 0".into()));
        }
        if let Some((x, y)) = pairs(s.size, s.size).find(|&(x, y)| f[s.add(x, y)] != t.add(f[x], f[y])) {
            return Err(Error::NotHomomorphism(format!("f({x}+{y}) != f({x})+f({y})")));
        }
        if let Some((a, x)) = pairs(s.ring.size(), s.size).find(|&(a, x)| f[s.act(a, x)] != t.act(a, f[x])) {
            return Err(Error::NotHomomorphism(format!("f({a}·{x}) != {a}·f({x})")));
        }
        Ok(())
    }

    /// Extends `gens[i] ↦ images[i]` linearly. Fails when the generators do
    /// not span the source or the assignment is inconsistent.
    pub fn from_generator_images(
        source: Arc<FiniteModule>,
        target: Arc<FiniteModule>,
        gens: &[usize],
        images: &[usize],
    ) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::Shape("generators and images differ in length".into()));
        }
        for (&g, &y) in gens.iter().zip(images) {
            if g >= source.size {
                return Err(Error::OutOfRange {
                    index: g,
                    size: source.size,
                });
            }
            if y >= target.size {
                return Err(Error::OutOfRange {
                    index: y,
                    size: target.size,
                });
            }
        }
        let k = source.ring.size();
        let mut map = vec![usize::MAX; source.size];
        let mut assigned: Vec<usize> = Vec::new();
        let mut queue: Vec<usize> = Vec::new();
        let assign = |x: usize, y: usize, map: &mut Vec<usize>, queue: &mut Vec<usize>| {
            if map[x] == usize::MAX {
                map[x] = y;
                queue.push(x);
                Ok(())
            } else if map[x] == y {
                Ok(())
            } else {
                Err(Error::NotHomomorphism(format!(
                    "element {x} would map to both {} and {y}",
                    map[x]
                )))
            }
        };
        assign(source.zero, target.zero, &mut map, &mut queue)?;
        for (&g, &y) in gens.iter().zip(images) {
            assign(g, y, &mut map, &mut queue)?;
        }
        while let Some(x) = queue.pop() {
            assigned.push(x);
            for a in 0..k {
                let (sx, ty) = (source.act(a, x), target.act(a, map[x]));
                assign(sx, ty, &mut map, &mut queue)?;
            }
            for &z in &assigned {
                let (sx, ty) = (source.add(x, z), target.add(map[x], map[z]));
                assign(sx, ty, &mut map, &mut queue)?;
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::InvalidArgument(
                "generators do not span the source module".into(),
            ));
        }
        ModuleHom::new(source, target, map)
    }

    pub fn source(&self) -> &Arc<FiniteModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteModule> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        Bits::from_indices(self.target.size, self.map.iter().copied()).is_full()
    }

    pub fn kernel(&self) -> Submodule {
        self.preimage_bits(&Bits::from_indices(self.target.size, [self.target.zero]))
    }

    pub fn image(&self, p: &Submodule) -> Result<Submodule> {
        p.check_module(&self.source)?;
        Ok(Submodule::from_bits_unchecked(
            &self.target,
            Bits::from_indices(self.target.size, p.members.iter().map(|x| self.map[x])),
        ))
    }

    pub fn preimage(&self, q: &Submodule) -> Result<Submodule> {
        q.check_module(&self.target)?;
        Ok(self.preimage_bits(&q.members))
    }

    fn preimage_bits(&self, q: &Bits) -> Submodule {
        Submodule::from_bits_unchecked(
            &self.source,
            Bits::from_indices(
                self.source.size,
                (0..self.source.size).filter(|&x| q.contains(self.map[x])),
            ),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod_module(n: usize) -> Arc<FiniteModule> {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        Arc::new(FiniteModule::ring_as_module(&r))
    }

    fn sub(m: &Arc<FiniteModule>, gens: &[usize]) -> Submodule {
        Submodule::generated(m, gens).unwrap()
    }

    /// Z_k as a Z_n-module by reduction, k | n.
    fn reduction(n: usize, k: usize) -> Arc<FiniteModule> {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        let add = (0..k * k).map(|c| (c / k + c % k) % k).collect();
        let act = (0..n * k).map(|c| (c / k) * (c % k) % k).collect();
        Arc::new(FiniteModule::from_tables(format!("Z{k}"), r, k, add, act, 0, None).unwrap())
    }

    #[test]
    fn validation() {
        assert!(zmod_module(8).validate().is_empty());
        assert!(reduction(12, 2).validate().is_empty());
        let m = zmod_module(4);
        let mut act = m.action_table();
        act[2 * 4 + 1] = 1;
        let bad = FiniteModule::from_tables("bad", Arc::clone(m.ring()), 4, m.add_table(), act, 0, None).unwrap();
        assert!(!bad.validate().is_empty());
    }

    #[test]
    fn lattices() {
        let m = zmod_module(8);
        let subs: Vec<Vec<usize>> = m
            .all_submodules()
            .unwrap()
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        assert_eq!(
            subs,
            vec![vec![0], vec![0, 4], vec![0, 2, 4, 6], (0..8).collect::<Vec<_>>()]
        );
        // Klein four-group with Z_4 acting through Z_2
        let r4 = Arc::new(FiniteRing::zmod(4).unwrap());
        let add = (0..16).map(|c| (c / 4) ^ (c % 4)).collect();
        let act = (0..16).map(|c| if (c / 4) % 2 == 1 { c % 4 } else { 0 }).collect();
        let v = Arc::new(FiniteModule::from_tables("V4", r4, 4, add, act, 0, None).unwrap());
        assert!(v.validate().is_empty());
        assert_eq!(v.all_submodules().unwrap().len(), 5);
        assert!(!v.is_multiplication_module().unwrap());
    }

    #[test]
    fn lattice_cap() {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let n = 1024;
        let add = (0..n * n).map(|c| (c / n) ^ (c % n)).collect();
        let act = (0..2 * n).map(|c| if c / n == 1 { c % n } else { 0 }).collect();
        let big = Arc::new(FiniteModule::from_tables("F2^10", r, n, add, act, 0, None).unwrap());
        assert!(matches!(big.all_submodules(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn residuals() {
        let m4 = zmod_module(4);
        let p = sub(&m4, &[2]);
        assert!(p.residual_by_scalar(2).members().is_full());
        assert_eq!(p.residual_by_scalar(1), p);
        let m8 = zmod_module(8);
        let z = m8.zero_submodule();
        assert_eq!(z.residual_by_scalar(4).members().to_vec(), vec![0, 2, 4, 6]);
        assert_eq!(z.residual_by_element(2).elements(), vec![0, 4]);
        assert!(sub(&m8, &[2]).residual_by_element(4).members().is_full());
        assert_eq!(m8.annihilator().elements(), vec![0]);
        let p4 = sub(&m8, &[4]);
        assert_eq!(p4.residual_by_submodule(&m8.whole()).elements(), vec![0, 4]);
        assert!(p4.residual_by_submodule(&p4).members().is_full());
    }

    #[test]
    fn ideal_times_submodule() {
        let m8 = zmod_module(8);
        let r = m8.ring();
        let two = Ideal::generated(r, &[2]).unwrap();
        assert_eq!(two.times(&m8.whole()).unwrap(), sub(&m8, &[2]));
        assert_eq!(r.zero_ideal().times(&m8.whole()).unwrap(), m8.zero_submodule());
        let twice = two.times(&two.times(&m8.whole()).unwrap()).unwrap();
        assert_eq!(twice, sub(&m8, &[4]));
    }

    #[test]
    fn quotients_and_homs() {
        let m8 = zmod_module(8);
        let l = sub(&m8, &[4]);
        let (q, proj) = m8.quotient(&l).unwrap();
        assert_eq!(q.size(), 4);
        assert!(q.validate().is_empty());
        assert!(proj.is_surjective());
        assert_eq!(proj.kernel(), l);
        assert_eq!(proj.preimage(&q.zero_submodule()).unwrap(), l);
        let img = proj.image(&sub(&m8, &[2])).unwrap();
        assert_eq!(img.members().to_vec(), vec![0, 2]);

        let (same, _) = m8.quotient(&m8.zero_submodule()).unwrap();
        assert_eq!(same.add_table(), m8.add_table());
        let (single, _) = m8.quotient(&m8.whole()).unwrap();
        assert_eq!(single.size(), 1);
    }

    #[test]
    fn hom_from_generators() {
        let m8 = zmod_module(8);
        let m4 = reduction(8, 4);
        let f = ModuleHom::from_generator_images(Arc::clone(&m8), Arc::clone(&m4), &[1], &[1]).unwrap();
        assert_eq!(f.map(), &[0, 1, 2, 3, 0, 1, 2, 3]);
        let bad = ModuleHom::from_generator_images(Arc::clone(&m4), Arc::clone(&m8), &[1], &[1]);
        assert!(bad.is_err());
        let short = ModuleHom::from_generator_images(Arc::clone(&m8), m8, &[2], &[2]);
        assert!(short.is_err());
    }

    #[test]
    fn multiplication_modules() {
        let m8 = zmod_module(8);
        assert!(m8.is_multiplication_module().unwrap());
        let two = sub(&m8, &[2]);
        assert_eq!(submodule_product(&two, &two).unwrap(), sub(&m8, &[4]));
    }

    #[test]
    fn cyclic_submodule_of_product_module() {
        // Z_2 x Z_3 over Z_6 is cyclic
        let r = Arc::new(FiniteRing::zmod(6).unwrap());
        let add = (0..36)
            .map(|c| {
                let (x, y) = (c / 6, c % 6);
                ((x / 3 + y / 3) % 2) * 3 + (x % 3 + y % 3) % 3
            })
            .collect();
        let act = (0..36)
            .map(|c| {
                let (a, x) = (c / 6, c % 6);
                ((a * (x / 3)) % 2) * 3 + (a * (x % 3)) % 3
            })
            .collect();
        let m = Arc::new(FiniteModule::from_tables("Z2xZ3", r, 6, add, act, 0, None).unwrap());
        assert!(m.validate().is_empty());
        let first = sub(&m, &[3]);
        assert_eq!(first.members().to_vec(), vec![0, 3]);
    }
}
