//! Module constructions: direct sums over one ring, products over product
//! rings, free modules `A^k ⊗ M ≅ M^k`, and amalgamated duplication along an
//! ideal.

use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::module::{FiniteModule, Submodule, MAX_GENERATE};
use crate::ring::{FiniteRing, Ideal};

/// Row-major strides for a mixed-radix index.
fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sizes[i + 1];
    }
    s
}

fn decode(mut x: usize, sizes: &[usize], out: &mut [usize]) {
    for i in (0..sizes.len()).rev() {
        out[i] = x % sizes[i];
        x /= sizes[i];
    }
}

fn tuple_names(parts: &[&[String]]) -> Vec<String> {
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let total: usize = sizes.iter().product();
    let mut idx = vec![0; sizes.len()];
    (0..total)
        .map(|x| {
            decode(x, &sizes, &mut idx);
            let comps: Vec<&str> = idx.iter().zip(parts).map(|(&i, p)| p[i].as_str()).collect();
            format!("({})", comps.join(","))
        })
        .collect()
}

fn check_total(sizes: &[usize], cap: usize) -> Result<usize> {
    let mut total = 1usize;
    for &s in sizes {
        total = total.saturating_mul(s);
    }
    if total > cap {
        return Err(Error::TooLarge {
            what: "module",
            size: total,
            cap,
        });
    }
    Ok(total)
}

/// Direct sum of modules over one ring, indexed row-major.
pub fn direct_sum(parts: &[&Arc<FiniteModule>]) -> Result<FiniteModule> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
    let ring = Arc::clone(first.ring());
    if parts.iter().any(|p| **p.ring() != *ring) {
        return Err(Error::Mismatch("rings"));
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.size()).collect();
    let n = check_total(&sizes, MAX_GENERATE)?;
    let st = strides(&sizes);
    let k = ring.size();
    let mut x = vec![0; parts.len()];
    let mut y = vec![0; parts.len()];
    let mut add = Vec::with_capacity(n * n);
    for i in 0..n {
        decode(i, &sizes, &mut x);
        for j in 0..n {
            decode(j, &sizes, &mut y);
            add.push((0..parts.len()).map(|c| parts[c].add(x[c], y[c]) * st[c]).sum());
        }
    }
    let mut action = Vec::with_capacity(k * n);
    for a in 0..k {
        for i in 0..n {
            decode(i, &sizes, &mut x);
            action.push((0..parts.len()).map(|c| parts[c].act(a, x[c]) * st[c]).sum());
        }
    }
    let zero = (0..parts.len()).map(|c| parts[c].zero() * st[c]).sum();
    let names: Vec<&[String]> = parts.iter().map(|p| p.names()).collect();
    let label = parts.iter().map(|p| p.label()).collect::<Vec<_>>().join("+");
    FiniteModule::from_tables(label, ring, n, add, action, zero, Some(tuple_names(&names)))
}

/// `A^k ⊗ M ≅ M^k` with the diagonal action, and `P ↦ P^k`.
#[derive(Clone, Debug)]
pub struct FreeTensor {
    base: Arc<FiniteModule>,
    rank: usize,
    module: Arc<FiniteModule>,
}

impl FreeTensor {
    pub fn new(base: &Arc<FiniteModule>, rank: usize) -> Result<Self> {
        Self::with_cap(base, rank, MAX_GENERATE)
    }

    pub fn with_cap(base: &Arc<FiniteModule>, rank: usize, cap: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("free rank must be at least 1".into()));
        }
        check_total(&vec![base.size(); rank], cap)?;
        let module = if rank == 1 {
            (**base).clone()
        } else {
            let copies: Vec<&Arc<FiniteModule>> = vec![base; rank];
            direct_sum(&copies)?.with_label(format!("{}^{rank}", base.label()))
        };
        Ok(FreeTensor {
            base: Arc::clone(base),
            rank,
            module: Arc::new(module),
        })
    }

    pub fn base(&self) -> &Arc<FiniteModule> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    /// `P^k` inside `M^k`.
    pub fn submodule(&self, p: &Submodule) -> Result<Submodule> {
        p.check_module(&self.base)?;
        let sizes = vec![self.base.size(); self.rank];
        let mut x = vec![0; self.rank];
        let members = Bits::from_indices(
            self.module.size(),
            (0..self.module.size()).filter(|&i| {
                decode(i, &sizes, &mut x);
                x.iter().all(|&c| p.contains(c))
            }),
        );
        Ok(Submodule::from_bits_unchecked(&self.module, members))
    }
}

/// `M_1 × … × M_n` over `A_1 × … × A_n`, folded from binary products.
#[derive(Clone, Debug)]
pub struct ProductModule {
    factors: Vec<Arc<FiniteModule>>,
    module: Arc<FiniteModule>,
}

impl ProductModule {
    pub fn new(factors: &[Arc<FiniteModule>]) -> Result<Self> {
        Self::with_cap(factors, MAX_GENERATE)
    }

    pub fn with_cap(factors: &[Arc<FiniteModule>], cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("empty product".into()));
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
        check_total(&sizes, cap)?;
        let mut acc = (*factors[0]).clone();
        for f in &factors[1..] {
            acc = binary_product(&acc, f);
        }
        let rings: Vec<&FiniteRing> = factors.iter().map(|f| f.ring().as_ref()).collect();
        let ring = Arc::new(FiniteRing::product_n(&rings));
        let names: Vec<&[String]> = factors.iter().map(|f| f.names()).collect();
        let label = factors.iter().map(|f| f.label()).collect::<Vec<_>>().join("x");
        let mut module = FiniteModule::from_tables(
            label,
            ring,
            acc.size(),
            acc.add_table(),
            acc.action_table(),
            acc.zero(),
            None,
        )?;
        if factors.len() > 1 {
            module.set_names(tuple_names(&names));
        }
        Ok(ProductModule {
            factors: factors.to_vec(),
            module: Arc::new(module),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.module = Arc::new((*self.module).clone().with_label(label));
        self
    }

    pub fn factors(&self) -> &[Arc<FiniteModule>] {
        &self.factors
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.size()).collect()
    }

    /// `P_1 × … × P_n`.
    pub fn submodule(&self, parts: &[Submodule]) -> Result<Submodule> {
        if parts.len() != self.factors.len() {
            return Err(Error::Shape("one component per factor required".into()));
        }
        for (p, f) in parts.iter().zip(&self.factors) {
            p.check_module(f)?;
        }
        let sizes = self.sizes();
        let mut x = vec![0; sizes.len()];
        let members = Bits::from_indices(
            self.module.size(),
            (0..self.module.size()).filter(|&i| {
                decode(i, &sizes, &mut x);
                x.iter().zip(parts).all(|(&c, p)| p.contains(c))
            }),
        );
        Ok(Submodule::from_bits_unchecked(&self.module, members))
    }

    /// Components `P_k = {m : m placed in slot k lies in P}`.
    pub fn components(&self, p: &Submodule) -> Result<Vec<Submodule>> {
        p.check_module(&self.module)?;
        let st = strides(&self.sizes());
        Ok(self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let others: usize = self
                    .factors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(j, g)| g.zero() * st[j])
                    .sum();
                let members = Bits::from_indices(f.size(), (0..f.size()).filter(|&m| p.contains(others + m * st[k])));
                Submodule::from_bits_unchecked(f, members)
            })
            .collect())
    }
}

fn binary_product(m1: &FiniteModule, m2: &FiniteModule) -> FiniteModule {
    let ring = Arc::new(FiniteRing::product(m1.ring(), m2.ring()));
    let (n1, n2) = (m1.size(), m2.size());
    let k2 = m2.ring().size();
    let n = n1 * n2;
    let mut add = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            add.push(m1.add(x / n2, y / n2) * n2 + m2.add(x % n2, y % n2));
        }
    }
    let mut action = Vec::with_capacity(ring.size() * n);
    for a in 0..ring.size() {
        for x in 0..n {
            action.push(m1.act(a / k2, x / n2) * n2 + m2.act(a % k2, x % n2));
        }
    }
    FiniteModule::from_tables("", ring, n, add, action, m1.zero() * n2 + m2.zero(), None)
        .expect("product of well-shaped tables is well shaped")
}

/// `A ⋈ I = {(a, a+i)}`, with element `(a, a+i)` stored at `a·|I| + pos(i)`.
#[derive(Clone, Debug)]
pub struct AmalgamRing {
    base: Arc<FiniteRing>,
    ideal: Ideal,
    ideal_elems: Vec<usize>,
    ideal_pos: Vec<usize>,
    ring: Arc<FiniteRing>,
}

impl AmalgamRing {
    pub fn new(ideal: &Ideal) -> Self {
        let base = Arc::clone(ideal.ring());
        let elems = ideal.elements();
        let mut pos = vec![usize::MAX; base.size()];
        for (p, &i) in elems.iter().enumerate() {
            pos[i] = p;
        }
        let w = elems.len();
        let n = base.size() * w;
        let split = |x: usize| (x / w, elems[x % w]);
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a, i) = split(x);
            for y in 0..n {
                let (b, j) = split(y);
                add.push(base.add(a, b) * w + pos[base.add(i, j)]);
                let first = base.mul(a, b);
                let second = base.mul(base.add(a, i), base.add(b, j));
                mul.push(first * w + pos[base.sub(second, first)]);
            }
        }
        let names = (0..n)
            .map(|x| {
                let (a, i) = split(x);
                format!("({},{})", base.name(a), base.name(base.add(a, i)))
            })
            .collect();
        let ring = FiniteRing::from_tables(
            format!("{}⋈{}", base.label(), ideal.short_name()),
            n,
            add,
            mul,
            base.zero() * w + pos[base.zero()],
            base.one() * w + pos[base.zero()],
            Some(names),
        )
        .expect("amalgam tables are well shaped");
        AmalgamRing {
            base,
            ideal: ideal.clone(),
            ideal_elems: elems,
            ideal_pos: pos,
            ring: Arc::new(ring),
        }
    }

    pub fn base(&self) -> &Arc<FiniteRing> {
        &self.base
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    /// Index of `(a, a+i)`.
    pub fn element(&self, a: usize, i: usize) -> usize {
        debug_assert!(self.ideal.contains(i));
        a * self.ideal_elems.len() + self.ideal_pos[i]
    }

    /// `(a, i)` for the element `(a, a+i)`.
    pub fn split(&self, x: usize) -> (usize, usize) {
        let w = self.ideal_elems.len();
        (x / w, self.ideal_elems[x % w])
    }

    /// The pair `(a, a+i)` in base-ring indices.
    pub fn components(&self, x: usize) -> (usize, usize) {
        let (a, i) = self.split(x);
        (a, self.base.add(a, i))
    }

    /// `J ⋈ I = {(x, x+i) : x ∈ J, i ∈ I}` as a subset of `A ⋈ I`.
    pub fn lift(&self, j: &Ideal) -> Bits {
        let w = self.ideal_elems.len();
        Bits::from_indices(
            self.ring.size(),
            j.elements().into_iter().flat_map(|x| (0..w).map(move |p| x * w + p)),
        )
    }

    /// Units predicted componentwise: `(a, a+i)` with both coordinates units.
    pub fn componentwise_units(&self) -> Bits {
        Bits::from_indices(
            self.ring.size(),
            (0..self.ring.size()).filter(|&x| {
                let (a, b) = self.components(x);
                self.base.is_unit(a) && self.base.is_unit(b)
            }),
        )
    }
}

/// `M ⋈ I = {(m, m+m′) : m′ ∈ IM}` over `A ⋈ I`, element `(m, m+m′)` stored at
/// `m·|IM| + pos(m′)`.
#[derive(Clone, Debug)]
pub struct AmalgamModule {
    base: Arc<FiniteModule>,
    ring: AmalgamRing,
    im: Submodule,
    im_elems: Vec<usize>,
    im_pos: Vec<usize>,
    module: Arc<FiniteModule>,
}

impl AmalgamModule {
    pub fn new(base: &Arc<FiniteModule>, ideal: &Ideal) -> Result<Self> {
        Self::with_cap(base, ideal, MAX_GENERATE)
    }

    pub fn with_cap(base: &Arc<FiniteModule>, ideal: &Ideal, cap: usize) -> Result<Self> {
        if **ideal.ring() != **base.ring() {
            return Err(Error::Mismatch("rings"));
        }
        let im = ideal.times(&base.whole())?;
        let elems = im.members().to_vec();
        let w = elems.len();
        let n = check_total(&[base.size(), w], cap)?;
        let amalgam = AmalgamRing::new(ideal);
        let a = amalgam.base();
        let mut pos = vec![usize::MAX; base.size()];
        for (p, &m) in elems.iter().enumerate() {
            pos[m] = p;
        }
        let split = |x: usize| (x / w, elems[x % w]);
        let mut add = Vec::with_capacity(n * n);
        for x in 0..n {
            let (m, mp) = split(x);
            for y in 0..n {
                let (k, kp) = split(y);
                add.push(base.add(m, k) * w + pos[base.add(mp, kp)]);
            }
        }
        let mut action = Vec::with_capacity(amalgam.ring().size() * n);
        for s in 0..amalgam.ring().size() {
            let (r, i) = amalgam.split(s);
            let ri = a.add(r, i);
            for x in 0..n {
                let (m, mp) = split(x);
                let first = base.act(r, m);
                let second = base.act(ri, base.add(m, mp));
                action.push(first * w + pos[base.add(second, base.neg(first))]);
            }
        }
        let names = (0..n)
            .map(|x| {
                let (m, mp) = split(x);
                format!("({},{})", base.name(m), base.name(base.add(m, mp)))
            })
            .collect();
        let module = FiniteModule::from_tables(
            format!("{}⋈{}", base.label(), ideal.short_name()),
            Arc::clone(amalgam.ring()),
            n,
            add,
            action,
            base.zero() * w + pos[base.zero()],
            Some(names),
        )?;
        Ok(AmalgamModule {
            base: Arc::clone(base),
            ring: amalgam,
            im,
            im_elems: elems,
            im_pos: pos,
            module: Arc::new(module),
        })
    }

    pub fn base(&self) -> &Arc<FiniteModule> {
        &self.base
    }

    pub fn amalgam_ring(&self) -> &AmalgamRing {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal {
        self.ring.ideal()
    }

    /// The cached submodule `IM` parameterising the carrier.
    pub fn im(&self) -> &Submodule {
        &self.im
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    /// Index of `(m, m+m′)`.
    pub fn element(&self, m: usize, m_prime: usize) -> usize {
        debug_assert!(self.im.contains(m_prime));
        m * self.im_elems.len() + self.im_pos[m_prime]
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        let w = self.im_elems.len();
        (x / w, self.im_elems[x % w])
    }

    /// `P ⋈ I = {(m, m+m′) : m ∈ P, m′ ∈ IM}`.
    pub fn submodule(&self, p: &Submodule) -> Result<Submodule> {
        p.check_module(&self.base)?;
        let w = self.im_elems.len();
        let members = Bits::from_indices(
            self.module.size(),
            p.members().iter().flat_map(|m| (0..w).map(move |j| m * w + j)),
        );
        Ok(Submodule::from_bits_unchecked(&self.module, members))
    }

    /// Residual by a ring element, computed on both sides:
    /// `(P⋈I :_{M⋈I} (a,a+i))` by sweep against `(P :_M a) ⋈ I`.
    pub fn residual_by_scalar_agrees(&self, p: &Submodule, a: usize, i: usize) -> Result<bool> {
        let lifted = self.submodule(p)?;
        let left = lifted.residual_by_scalar(self.ring.element(a, i));
        let right = self.submodule(&p.residual_by_scalar(a))?;
        Ok(left.members() == right.members())
    }

    /// Residual by a module element, computed on both sides:
    /// `(P⋈I :_{A⋈I} (m,m+m′))` by sweep against `(P :_A m) ⋈ I`.
    pub fn residual_by_element_agrees(&self, p: &Submodule, m: usize, m_prime: usize) -> Result<bool> {
        let lifted = self.submodule(p)?;
        let left = lifted.residual_by_element(self.element(m, m_prime));
        let right = self.ring.lift(&p.residual_by_element(m));
        Ok(*left.members() == right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(n).unwrap())
    }

    fn rmod(n: usize) -> Arc<FiniteModule> {
        Arc::new(FiniteModule::ring_as_module(&ring(n)))
    }

    #[test]
    fn amalgam_ring_units_and_size() {
        let r = ring(4);
        let i = Ideal::generated(&r, &[2]).unwrap();
        let d = AmalgamRing::new(&i);
        assert_eq!(d.ring().size(), 8);
        assert!(d.ring().validate().is_empty());
        let units: Vec<(usize, usize)> = d.ring().unit_mask().iter().map(|x| d.components(x)).collect();
        assert_eq!(units, vec![(1, 1), (1, 3), (3, 3), (3, 1)]);
        assert_eq!(*d.ring().unit_mask(), d.componentwise_units());
    }

    #[test]
    fn amalgam_along_zero_is_diagonal() {
        let r = ring(6);
        let d = AmalgamRing::new(&r.zero_ideal());
        assert_eq!(**d.ring(), *r);
    }

    #[test]
    fn amalgam_module_sizes() {
        let m = rmod(4);
        let i = Ideal::generated(m.ring(), &[2]).unwrap();
        let d = AmalgamModule::new(&m, &i).unwrap();
        assert_eq!(d.module().size(), 8);
        assert!(d.module().validate().is_empty());
        let p = Submodule::generated(&m, &[2]).unwrap();
        assert_eq!(d.submodule(&p).unwrap().len(), 4);
        assert!(d.submodule(&m.whole()).unwrap().members().is_full());
        // over A itself the module and ring duplications coincide
        let as_module = FiniteModule::ring_as_module(d.amalgam_ring().ring());
        assert_eq!(as_module.add_table(), d.module().add_table());
        assert_eq!(as_module.action_table(), d.module().action_table());
    }

    #[test]
    fn amalgam_residuals() {
        let m = rmod(4);
        let i = Ideal::generated(m.ring(), &[2]).unwrap();
        let d = AmalgamModule::new(&m, &i).unwrap();
        let p = Submodule::generated(&m, &[2]).unwrap();
        let lifted = d.submodule(&p).unwrap();
        assert!(lifted
            .residual_by_scalar(d.amalgam_ring().element(2, 0))
            .members()
            .is_full());
        assert!(d.residual_by_scalar_agrees(&p, 2, 0).unwrap());
        assert_eq!(lifted.residual_by_scalar(d.amalgam_ring().element(1, 0)), lifted);
        assert!(d.residual_by_element_agrees(&p, 1, 0).unwrap());
        let left = lifted.residual_by_element(d.element(1, 0));
        assert_eq!(*left.members(), d.amalgam_ring().lift(&i));
    }

    #[test]
    fn amalgam_cap() {
        let m = rmod(8);
        let i = Ideal::generated(m.ring(), &[2]).unwrap();
        assert!(matches!(
            AmalgamModule::with_cap(&m, &i, 16),
            Err(Error::TooLarge { size: 32, .. })
        ));
    }

    #[test]
    fn free_tensors() {
        let m = rmod(4);
        let t = FreeTensor::new(&m, 2).unwrap();
        assert_eq!(t.module().size(), 16);
        assert!(t.module().validate().is_empty());
        let z = t.submodule(&m.zero_submodule()).unwrap();
        assert_eq!(z.members().to_vec(), vec![0]);
        let one = FreeTensor::new(&m, 1).unwrap();
        assert_eq!(**one.module(), *m);
        assert!(FreeTensor::new(&m, 0).is_err());
        assert!(FreeTensor::with_cap(&rmod(12), 4, 4096).is_err());
    }

    #[test]
    fn products() {
        let pm = ProductModule::new(&[rmod(2), rmod(3)]).unwrap();
        assert_eq!(pm.module().size(), 6);
        assert_eq!(pm.module().ring().size(), 6);
        assert!(pm.module().validate().is_empty());
        let m1 = &pm.factors()[0];
        let m2 = &pm.factors()[1];
        let p = pm.submodule(&[m1.whole(), m2.zero_submodule()]).unwrap();
        assert!(p.is_proper());
        assert_eq!(pm.components(&p).unwrap(), vec![m1.whole(), m2.zero_submodule()]);

        let t = ProductModule::new(&[rmod(2), rmod(3), rmod(4)]).unwrap();
        assert!(t.module().validate().is_empty());
        assert_eq!(t.module().name(t.module().size() - 1), "(1,2,3)");
        for s in t.module().all_submodules().unwrap() {
            let parts = t.components(&s).unwrap();
            assert_eq!(t.submodule(&parts).unwrap(), s);
        }
    }

    #[test]
    fn direct_sums() {
        let r = ring(12);
        let m = Arc::new(FiniteModule::ring_as_module(&r));
        let (q2, _) = m.quotient(&Submodule::generated(&m, &[2]).unwrap()).unwrap();
        let (q3, _) = m.quotient(&Submodule::generated(&m, &[3]).unwrap()).unwrap();
        let s = direct_sum(&[&q2, &q3, &m]).unwrap();
        assert_eq!(s.size(), 72);
        assert!(s.validate().is_empty());
        assert_eq!(s.name(36 + 12 + 1), "(1,1,1)");
    }
}
