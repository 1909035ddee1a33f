//! Finite commutative rings with identity, given by explicit operation tables,
//! together with their ideals.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::bits::Bits;
use crate::decision::Decision;
use crate::error::{Error, Result};

/// Rings above this size are refused by ideal enumeration and the
/// quantifier sweeps.
pub const MAX_ENUM_RING: usize = 64;

#[derive(Clone)]
pub struct FiniteRing {
    label: String,
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    unit_mask: Bits,
    names: Vec<String>,
    ideals: OnceLock<Vec<Bits>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteRing {
    /// Builds a ring from row-major `size × size` tables. Only the shape and
    /// index ranges are checked here; the axioms are checked by [`validate`].
    ///
    /// [`validate`]: FiniteRing::validate
    pub fn from_tables(
        label: impl Into<String>,
        size: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("ring carrier must be nonempty".into()));
        }
        for (what, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != size * size {
                return Err(Error::Shape(format!(
                    "{what} table has {} cells, expected {}",
                    t.len(),
                    size * size
                )));
            }
            if let Some(&bad) = t.iter().find(|&&x| x >= size) {
                return Err(Error::OutOfRange { index: bad, size });
            }
        }
        for idx in [zero, one] {
            if idx >= size {
                return Err(Error::OutOfRange { index: idx, size });
            }
        }
        let names = match names {
            Some(n) if n.len() == size => n,
            Some(n) => return Err(Error::Shape(format!("{} element names for {} elements", n.len(), size))),
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        let add: Vec<u32> = add.into_iter().map(|x| x as u32).collect();
        let mul: Vec<u32> = mul.into_iter().map(|x| x as u32).collect();
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&x| add[a * size + x] as usize == zero)
                    .map_or(u32::MAX, |x| x as u32)
            })
            .collect();
        let unit_mask = Bits::from_indices(
            size,
            (0..size).filter(|&a| (0..size).any(|x| mul[a * size + x] as usize == one)),
        );
        Ok(FiniteRing {
            label: label.into(),
            size,
            add,
            mul,
            neg,
            zero,
            one,
            unit_mask,
            names,
            ideals: OnceLock::new(),
        })
    }

    /// The residue ring Z/nZ.
    pub fn zmod(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Z_0 is not a finite ring".into()));
        }
        let add = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let mul = (0..n * n).map(|k| (k / n) * (k % n) % n).collect();
        Self::from_tables(format!("Z{n}"), n, add, mul, 0, 1 % n, None)
    }

    /// Direct product with row-major pairing `(a, b) ↦ a·|R2| + b`.
    pub fn product(r1: &FiniteRing, r2: &FiniteRing) -> Self {
        Self::product_n(&[r1, r2])
    }

    /// n-fold product, folded from the left; elements are named as flat tuples.
    pub fn product_n(factors: &[&FiniteRing]) -> Self {
        assert!(!factors.is_empty(), "empty ring product");
        let mut acc = factors[0].clone();
        let mut parts: Vec<Vec<String>> = acc.names.iter().map(|n| vec![n.clone()]).collect();
        for f in &factors[1..] {
            acc = Self::binary_product(&acc, f);
            parts = parts
                .iter()
                .flat_map(|p| {
                    f.names.iter().map(move |n| {
                        let mut q = p.clone();
                        q.push(n.clone());
                        q
                    })
                })
                .collect();
        }
        if factors.len() > 1 {
            acc.names = parts.iter().map(|p| format!("({})", p.join(","))).collect();
            acc.label = factors.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join("x");
        }
        acc
    }

    fn binary_product(r1: &FiniteRing, r2: &FiniteRing) -> Self {
        let (n1, n2) = (r1.size, r2.size);
        let n = n1 * n2;
        let pair = |k: usize| (k / n2, k % n2);
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a1, a2) = pair(x);
            for y in 0..n {
                let (b1, b2) = pair(y);
                add.push(r1.add(a1, b1) * n2 + r2.add(a2, b2));
                mul.push(r1.mul(a1, b1) * n2 + r2.mul(a2, b2));
            }
        }
        Self::from_tables(
            format!("{}x{}", r1.label, r2.label),
            n,
            add,
            mul,
            r1.zero * n2 + r2.zero,
            r1.one * n2 + r2.one,
            None,
        )
        .expect("product of well-shaped tables is well shaped")
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

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn add_table(&self) -> Vec<usize> {
        self.add.iter().map(|&x| x as usize).collect()
    }

    pub fn mul_table(&self) -> Vec<usize> {
        self.mul.iter().map(|&x| x as usize).collect()
    }

    pub fn unit_mask(&self) -> &Bits {
        &self.unit_mask
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit_mask.contains(a)
    }

    /// Nonunits in ascending index order; zero is a nonunit.
    pub fn nonunits(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| !self.is_unit(a)).collect()
    }

    /// True when every nonunit is zero, which makes the nonunit-quantified
    /// predicates hold trivially.
    pub fn is_field_like(&self) -> bool {
        self.nonunits().iter().all(|&a| a == self.zero)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn check_enumerable(&self) -> Result<()> {
        if self.size > MAX_ENUM_RING {
            return Err(Error::TooLarge {
                what: "ring",
                size: self.size,
                cap: MAX_ENUM_RING,
            });
        }
        Ok(())
    }

    /// Axiom sweep. Empty iff the tables define a commutative ring with
    /// identity and the unit mask is exact; otherwise one diagnostic per
    /// violated axiom carrying the first witness found.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.size;
        let (z, o) = (self.zero, self.one);
        let mut out = Vec::new();
        let mut first = |axiom: Axiom, w: Option<Vec<usize>>| {
            if let Some(witness) = w {
                out.push(Diagnostic { axiom, witness });
            }
        };
        first(
            Axiom::AddIdentity,
            (0..n)
                .find(|&a| self.add(z, a) != a || self.add(a, z) != a)
                .map(|a| vec![a]),
        );
        first(
            Axiom::AddInverse,
            (0..n).find(|&a| self.neg[a] == u32::MAX).map(|a| vec![a]),
        );
        first(
            Axiom::AddCommutative,
            find_pair(n, |a, b| self.add(a, b) != self.add(b, a)),
        );
        first(
            Axiom::AddAssociative,
            find_triple(n, |a, b, c| self.add(self.add(a, b), c) != self.add(a, self.add(b, c))),
        );
        first(
            Axiom::MulCommutative,
            find_pair(n, |a, b| self.mul(a, b) != self.mul(b, a)),
        );
        first(
            Axiom::MulAssociative,
            find_triple(n, |a, b, c| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))),
        );
        first(
            Axiom::Distributive,
            find_triple(n, |a, b, c| {
                self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
            }),
        );
        first(
            Axiom::MulIdentity,
            (0..n)
                .find(|&a| self.mul(o, a) != a || self.mul(a, o) != a)
                .map(|a| vec![a]),
        );
        let recomputed = Bits::from_indices(n, (0..n).filter(|&a| (0..n).any(|x| self.mul(a, x) == o)));
        first(
            Axiom::UnitMask,
            (0..n)
                .find(|&a| recomputed.contains(a) != self.unit_mask.contains(a))
                .map(|a| vec![a]),
        );
        if n > 1 && self.unit_mask.contains(z) {
            first(Axiom::ZeroIsUnit, Some(vec![z]));
        }
        out
    }

    /// All ideals, sorted by (size, member order).
    pub fn ideals(self: &Arc<Self>) -> Result<Vec<Ideal>> {
        self.check_enumerable()?;
        let bits = self.ideals.get_or_init(|| self.enumerate_ideals());
        Ok(bits
            .iter()
            .map(|b| Ideal {
                ring: Arc::clone(self),
                members: b.clone(),
            })
            .collect())
    }

    /// Closure of the principal ideals under pairwise sums.
    fn enumerate_ideals(&self) -> Vec<Bits> {
        use std::collections::BTreeSet;
        let principal: BTreeSet<Bits> = (0..self.size).map(|g| self.principal_bits(g)).collect();
        let principal: Vec<Bits> = principal.into_iter().collect();
        let mut seen: BTreeSet<Bits> = principal.iter().cloned().collect();
        let mut work: Vec<Bits> = principal.clone();
        while let Some(cur) = work.pop() {
            for p in &principal {
                if p.is_subset(&cur) {
                    continue;
                }
                let s = self.sum_bits(&cur, p);
                if seen.insert(s.clone()) {
                    work.push(s);
                }
            }
        }
        let mut all: Vec<Bits> = seen.into_iter().collect();
        all.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        all
    }

    fn principal_bits(&self, g: usize) -> Bits {
        Bits::from_indices(self.size, (0..self.size).map(|a| self.mul(a, g)))
    }

    fn sum_bits(&self, x: &Bits, y: &Bits) -> Bits {
        let ys = y.to_vec();
        let mut out = Bits::empty(self.size);
        for a in x.iter() {
            for &b in &ys {
                out.insert(self.add(a, b));
            }
        }
        out
    }

    /// Smallest ideal containing `gens`.
    pub(crate) fn span_bits(&self, gens: impl IntoIterator<Item = usize>) -> Bits {
        let mut cur = Bits::from_indices(self.size, [self.zero]);
        for g in gens {
            if !cur.contains(g) {
                cur = self.sum_bits(&cur, &self.principal_bits(g));
            }
        }
        cur
    }

    pub fn maximal_ideals(self: &Arc<Self>) -> Result<Vec<Ideal>> {
        let all = self.ideals()?;
        let proper: Vec<&Ideal> = all.iter().filter(|i| i.is_proper()).collect();
        Ok(proper
            .iter()
            .filter(|i| {
                !proper
                    .iter()
                    .any(|j| j.members != i.members && i.members.is_subset(&j.members))
            })
            .map(|i| (*i).clone())
            .collect())
    }

    /// The unique maximal ideal when the ring is local.
    pub fn local_maximal(self: &Arc<Self>) -> Result<Option<Ideal>> {
        let mut max = self.maximal_ideals()?;
        Ok(if max.len() == 1 { max.pop() } else { None })
    }

    pub fn jacobson_radical(self: &Arc<Self>) -> Result<Ideal> {
        let max = self.maximal_ideals()?;
        let mut members = Bits::full(self.size);
        for m in &max {
            members.intersect_with(&m.members);
        }
        Ok(Ideal {
            ring: Arc::clone(self),
            members,
        })
    }

    pub fn whole(self: &Arc<Self>) -> Ideal {
        Ideal {
            ring: Arc::clone(self),
            members: Bits::full(self.size),
        }
    }

    pub fn zero_ideal(self: &Arc<Self>) -> Ideal {
        Ideal {
            ring: Arc::clone(self),
            members: Bits::from_indices(self.size, [self.zero]),
        }
    }
}

fn find_pair(n: usize, bad: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| bad(a, b))
        .map(|(a, b)| vec![a, b])
}

fn find_triple(n: usize, bad: impl Fn(usize, usize, usize) -> bool) -> Option<Vec<usize>> {
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if bad(a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    AddIdentity,
    AddInverse,
    AddCommutative,
    AddAssociative,
    MulCommutative,
    MulAssociative,
    Distributive,
    MulIdentity,
    UnitMask,
    ZeroIsUnit,
    ActionIdentity,
    ActionAddScalars,
    ActionAddVectors,
    ActionCompatible,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::AddIdentity => "additive identity",
            Axiom::AddInverse => "additive inverse",
            Axiom::AddCommutative => "commutativity of addition",
            Axiom::AddAssociative => "associativity of addition",
            Axiom::MulCommutative => "commutativity of multiplication",
            Axiom::MulAssociative => "associativity of multiplication",
            Axiom::Distributive => "distributivity",
            Axiom::MulIdentity => "multiplicative identity",
            Axiom::UnitMask => "unit mask",
            Axiom::ZeroIsUnit => "zero is a unit",
            Axiom::ActionIdentity => "unital action 1m = m",
            Axiom::ActionAddScalars => "(a+b)m = am + bm",
            Axiom::ActionAddVectors => "a(m+n) = am + an",
            Axiom::ActionCompatible => "(ab)m = a(bm)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|x| x.to_string()).collect();
        write!(f, "{} fails at ({})", self.axiom, w.join(","))
    }
}

/// An ideal, identified by its member bitset.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    members: Bits,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && *self.ring == *other.ring
    }
}

impl Eq for Ideal {}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({}, {:?})", self.ring.label, self.members)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.members.iter().map(|a| self.ring.name(a)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl Ideal {
    pub fn generated(ring: &Arc<FiniteRing>, gens: &[usize]) -> Result<Ideal> {
        for &g in gens {
            if g >= ring.size {
                return Err(Error::OutOfRange {
                    index: g,
                    size: ring.size,
                });
            }
        }
        Ok(Ideal {
            ring: Arc::clone(ring),
            members: ring.span_bits(gens.iter().copied()),
        })
    }

    /// Wraps a bitset already known to be an ideal.
    pub(crate) fn from_bits_unchecked(ring: &Arc<FiniteRing>, members: Bits) -> Ideal {
        debug_assert_eq!(members.len(), ring.size);
        Ideal {
            ring: Arc::clone(ring),
            members,
        }
    }

    /// Checks closure before wrapping.
    pub fn from_bits(ring: &Arc<FiniteRing>, members: Bits) -> Result<Ideal> {
        if members.len() != ring.size {
            return Err(Error::Shape("ideal bitset length".into()));
        }
        let ok = members.contains(ring.zero)
            && members
                .iter()
                .all(|x| members.iter().all(|y| members.contains(ring.add(x, y))))
            && members
                .iter()
                .all(|x| (0..ring.size).all(|a| members.contains(ring.mul(a, x))));
        if !ok {
            return Err(Error::InvalidArgument("bitset is not an ideal".into()));
        }
        Ok(Ideal::from_bits_unchecked(ring, members))
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn members(&self) -> &Bits {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn is_proper(&self) -> bool {
        !self.members.contains(self.ring.one)
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    /// Greedy generators as `<g1,g2,..>`, or `<0>`.
    pub fn short_name(&self) -> String {
        let r = &self.ring;
        let mut span = Bits::from_indices(r.size, [r.zero]);
        let mut gens = Vec::new();
        for x in self.members.iter() {
            if !span.contains(x) {
                gens.push(x);
                span = r.span_bits(gens.iter().copied());
            }
        }
        if gens.is_empty() {
            return "<0>".into();
        }
        let names: Vec<&str> = gens.iter().map(|&g| r.name(g)).collect();
        format!("<{}>", names.join(","))
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::Mismatch("rings"))
        }
    }

    /// Ideal generated by all pairwise products.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let r = &self.ring;
        let ys = other.elements();
        let products = self.members.iter().flat_map(|x| ys.iter().map(move |&y| r.mul(x, y)));
        Ok(Ideal::from_bits_unchecked(r, r.span_bits(products)))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        Ok(Ideal::from_bits_unchecked(
            &self.ring,
            self.ring.sum_bits(&self.members, &other.members),
        ))
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        Ok(Ideal::from_bits_unchecked(
            &self.ring,
            self.members.intersection(&other.members),
        ))
    }

    /// `{a : a^k ∈ I for some k ≥ 1}`.
    pub fn radical(&self) -> Ideal {
        let r = &self.ring;
        let members = Bits::from_indices(
            r.size,
            (0..r.size).filter(|&a| {
                let mut p = a;
                // powers of a enter a cycle within `size` steps
                for _ in 0..=r.size {
                    if self.members.contains(p) {
                        return true;
                    }
                    p = r.mul(p, a);
                }
                false
            }),
        );
        Ideal::from_bits_unchecked(r, members)
    }

    fn require_proper(&self) -> Result<()> {
        self.ring.check_enumerable()?;
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::ImproperArgument("ideal"))
        }
    }

    /// `ab ∈ I ⇒ a ∈ I or b ∈ I`; witness `(a, b)`.
    pub fn is_prime(&self) -> Result<Decision<Vec<usize>>> {
        self.require_proper()?;
        let r = &self.ring;
        let n = r.size;
        Ok(Decision::from_witness(find_pair(n, |a, b| {
            self.contains(r.mul(a, b)) && !self.contains(a) && !self.contains(b)
        })))
    }

    /// `abc ∈ I ⇒ ab ∈ I or ac ∈ I or bc ∈ I` over all triples; witness `(a, b, c)`.
    pub fn is_two_absorbing(&self) -> Result<Decision<Vec<usize>>> {
        self.require_proper()?;
        let r = &self.ring;
        Ok(Decision::from_witness(find_triple(r.size, |a, b, c| {
            let (ab, ac, bc) = (r.mul(a, b), r.mul(a, c), r.mul(b, c));
            self.contains(r.mul(ab, c)) && !self.contains(ab) && !self.contains(ac) && !self.contains(bc)
        })))
    }

    /// `abc ∈ I ⇒ ab ∈ I or c ∈ I` over nonunit triples; witness `(a, b, c)`.
    pub fn is_one_absorbing_prime(&self) -> Result<Decision<Vec<usize>>> {
        self.require_proper()?;
        Ok(Decision::from_witness(one_absorbing_witness(&self.ring, &self.members)))
    }
}

/// Least nonunit triple violating the 1-absorbing condition for the bitset
/// `ideal`, which must be proper.
pub(crate) fn one_absorbing_witness(r: &FiniteRing, ideal: &Bits) -> Option<Vec<usize>> {
    let nu = r.nonunits();
    for &a in &nu {
        for &b in &nu {
            let ab = r.mul(a, b);
            if ideal.contains(ab) {
                continue;
            }
            for &c in &nu {
                if ideal.contains(r.mul(ab, c)) && !ideal.contains(c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    fn ideal(r: &Arc<FiniteRing>, gens: &[usize]) -> Ideal {
        Ideal::generated(r, gens).unwrap()
    }

    #[test]
    fn zmod_units() {
        assert_eq!(z(6).unit_mask().to_vec(), vec![1, 5]);
        assert_eq!(z(4).unit_mask().to_vec(), vec![1, 3]);
        let zero_ring = z(1);
        assert_eq!(zero_ring.unit_mask().to_vec(), vec![0]);
        assert!(zero_ring.validate().is_empty());
        assert!(FiniteRing::zmod(0).is_err());
    }

    #[test]
    fn validate_catalog_and_corruption() {
        assert!(z(8).validate().is_empty());
        let p = FiniteRing::product(&z(2), &z(3));
        assert!(p.validate().is_empty());

        let r = z(4);
        let mut mul = r.mul_table();
        mul[2 * 4 + 3] = 1;
        let bad = FiniteRing::from_tables("bad", 4, r.add_table(), mul, 0, 1, None).unwrap();
        let diags = bad.validate();
        assert!(diags
            .iter()
            .any(|d| matches!(d.axiom, Axiom::MulCommutative | Axiom::Distributive)));
        let comm = diags.iter().find(|d| d.axiom == Axiom::MulCommutative).unwrap();
        assert_eq!(comm.witness, vec![2, 3]);
    }

    #[test]
    fn products() {
        let p = FiniteRing::product(&z(2), &z(3));
        assert_eq!(p.size(), 6);
        assert_eq!(p.unit_mask().count(), 2);
        assert_eq!(p.name(p.one()), "(1,1)");
        let q = FiniteRing::product(&z(4), &z(4));
        let two_one = 2 * 4 + 1;
        assert!(!q.is_unit(two_one));
        let t = FiniteRing::product(&z(1), &z(5));
        assert_eq!(t, *z(5));
    }

    #[test]
    fn generated_ideals() {
        let r8 = z(8);
        assert_eq!(ideal(&r8, &[2]).elements(), vec![0, 2, 4, 6]);
        assert_eq!(ideal(&r8, &[]).elements(), vec![0]);
        let r6 = z(6);
        assert_eq!(ideal(&r6, &[4]).elements(), vec![0, 2, 4]);
    }

    #[test]
    fn ideal_arithmetic() {
        let r8 = z(8);
        let m = ideal(&r8, &[2]);
        assert_eq!(m.product(&m).unwrap(), ideal(&r8, &[4]));
        assert_eq!(r8.zero_ideal().product(&m).unwrap(), r8.zero_ideal());
        let r6 = z(6);
        let i = ideal(&r6, &[2]).intersection(&ideal(&r6, &[3])).unwrap();
        assert_eq!(i, r6.zero_ideal());
        assert_eq!(ideal(&r6, &[2]).sum(&ideal(&r6, &[3])).unwrap(), r6.whole());
        assert!(m.product(&r6.zero_ideal()).is_err());
    }

    #[test]
    fn radicals() {
        let r8 = z(8);
        assert_eq!(ideal(&r8, &[4]).radical(), ideal(&r8, &[2]));
        assert_eq!(r8.whole().radical(), r8.whole());
        let r6 = z(6);
        assert_eq!(r6.zero_ideal().radical(), r6.zero_ideal());
    }

    #[test]
    fn ideal_predicates() {
        let r8 = z(8);
        assert!(ideal(&r8, &[2]).is_prime().unwrap().holds());
        assert_eq!(ideal(&r8, &[4]).is_prime().unwrap(), Decision::Fails(vec![2, 2]));
        assert!(ideal(&r8, &[4]).is_one_absorbing_prime().unwrap().holds());
        assert!(ideal(&r8, &[2]).is_one_absorbing_prime().unwrap().holds());
        let r12 = z(12);
        assert_eq!(
            r12.zero_ideal().is_one_absorbing_prime().unwrap(),
            Decision::Fails(vec![2, 2, 3])
        );
        assert_eq!(
            r12.zero_ideal().is_two_absorbing().unwrap(),
            Decision::Fails(vec![2, 2, 3])
        );
        assert_eq!(r8.whole().is_prime(), Err(Error::ImproperArgument("ideal")));
    }

    #[test]
    fn locality_and_jacobson() {
        let r8 = z(8);
        assert_eq!(r8.local_maximal().unwrap(), Some(ideal(&r8, &[2])));
        let r6 = z(6);
        let max = r6.maximal_ideals().unwrap();
        assert_eq!(max, vec![ideal(&r6, &[3]), ideal(&r6, &[2])]);
        assert_eq!(r6.local_maximal().unwrap(), None);
        let r12 = z(12);
        assert_eq!(r12.jacobson_radical().unwrap(), ideal(&r12, &[6]));
        assert_eq!(z(1).local_maximal().unwrap(), None);
    }

    #[test]
    fn ideal_enumeration_counts() {
        // Z_n has one ideal per divisor of n
        for (n, d) in [(2, 2), (4, 3), (6, 4), (8, 4), (12, 6)] {
            assert_eq!(z(n).ideals().unwrap().len(), d, "Z{n}");
        }
        let big = Arc::new(FiniteRing::zmod(65).unwrap());
        assert!(matches!(big.ideals(), Err(Error::TooLarge { .. })));
    }
}
