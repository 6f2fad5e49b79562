//! Finite permutation groups with fully enumerated elements.
//!
//! A [`Group`] stores its elements in lexicographic order of their image
//! arrays together with a multiplication table, so almost everything else
//! works on element indices. The identity is always index 0.
//!
//! Subgroups are described relative to a parent by a sorted list of parent
//! indices ([`Subgroup`]); whenever a subgroup has to act as a group in its
//! own right (character tables, recursion into Clifford correspondents) it
//! is turned into an interned [`Group`] via [`Group::subgroup_group`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use crate::arith::lcm;
use crate::chartab::TableData;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::perm::Permutation;
use crate::pistructure::PiCache;

/// Resource limits for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub order: usize,
    pub subgroups: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: 5000, subgroups: 50_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: u32,
    /// Sorted element indices.
    pub members: Vec<u32>,
    pub order: u64,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub struct Group {
    name: String,
    degree: usize,
    caps: Caps,
    generators: Vec<u32>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u64>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
    exponent: u64,
    pub(crate) lattice: OnceLock<Arc<Lattice>>,
    pub(crate) table: OnceLock<Arc<TableData>>,
    pub(crate) pi_cache: Mutex<HashMap<Vec<u64>, Arc<PiCache>>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.elements == other.elements
    }
}

impl Eq for Group {}

impl Group {
    /// Enumerates the group generated by `gens` by product closure.
    pub fn from_generators(
        name: impl Into<String>,
        degree: usize,
        gens: Vec<Permutation>,
        caps: Caps,
    ) -> Result<Arc<Group>> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = x.then(s);
                if seen.insert(y.clone()) {
                    if seen.len() > caps.order {
                        return Err(Error::OrderCapExceeded { cap: caps.order });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let index: HashMap<Permutation, u32> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let mut gen_idx: Vec<u32> = gens.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        gen_idx.sort_unstable();
        gen_idx.dedup();
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&a.then(b)];
            }
        }
        Ok(Arc::new(Group::assemble(name.into(), degree, caps, elements, index, mul, Some(gen_idx))))
    }

    fn assemble(
        name: String,
        degree: usize,
        caps: Caps,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, u32>,
        mul: Vec<u32>,
        generators: Option<Vec<u32>>,
    ) -> Group {
        let n = elements.len();
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut orders = vec![1u64; n];
        for (a, o) in orders.iter_mut().enumerate() {
            let mut x = a as u32;
            while x != 0 {
                x = mul[x as usize * n + a];
                *o += 1;
            }
        }
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));
        let mut g = Group {
            name,
            degree,
            caps,
            generators: Vec::new(),
            elements,
            index,
            mul,
            inv,
            orders,
            classes: Vec::new(),
            class_of: Vec::new(),
            exponent,
            lattice: OnceLock::new(),
            table: OnceLock::new(),
            pi_cache: Mutex::new(HashMap::new()),
        };
        g.generators = match generators {
            Some(gens) => gens,
            None => g.small_generating_set(&(0..n as u32).collect::<Vec<_>>()),
        };
        g.compute_classes();
        g
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_id = vec![u32::MAX; n];
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for start in 0..n as u32 {
            if class_id[start as usize] != u32::MAX {
                continue;
            }
            let id = raw.len() as u32;
            let mut members = vec![start];
            class_id[start as usize] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for &s in &self.generators {
                    let y = self.conj(x, s);
                    if class_id[y as usize] == u32::MAX {
                        class_id[y as usize] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            raw.push(members);
        }
        raw.sort_by_key(|m| (self.orders[m[0] as usize], m.len(), m[0]));
        self.class_of = vec![0; n];
        self.classes = raw
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                for &x in &members {
                    self.class_of[x as usize] = c as u32;
                }
                ConjugacyClass { representative: members[0], order: self.orders[members[0] as usize], members }
            })
            .collect();
    }

    /// Greedy generating set drawn in order from `candidates`.
    fn small_generating_set(&self, candidates: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(self.order());
        for &x in candidates {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(&gens);
            }
        }
        gens
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: u32, k: u64) -> u32 {
        let k = k % self.orders[x as usize];
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> u64 {
        self.orders[x as usize]
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    /// Class of `g^k` for `g` in class `c`.
    pub fn class_power(&self, c: usize, k: u64) -> usize {
        self.class_of(self.pow(self.classes[c].representative, k))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted((0..self.order() as u32).collect(), self.order())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::trivial(self.order())
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[u32]) -> Subgroup {
        let n = self.order();
        let mut bits = vec![0u64; n.div_ceil(64)];
        let mut members = vec![0u32];
        bits[0] |= 1;
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for &s in gens {
                let y = self.mul(x, s);
                if bits[y as usize / 64] >> (y % 64) & 1 == 0 {
                    bits[y as usize / 64] |= 1 << (y % 64);
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        Subgroup { elements: members, bits }
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u32) -> Subgroup {
        let mut e: Vec<u32> = h.elements.iter().map(|&x| self.conj(x, g)).collect();
        e.sort_unstable();
        Subgroup::from_sorted(e, self.order())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.generators.iter().all(|&g| h.elements.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    /// Whether `g` normalizes `h`.
    pub fn normalizes(&self, g: u32, h: &Subgroup) -> bool {
        h.elements.iter().all(|&x| h.contains(self.conj(x, g)))
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let e = (0..self.order() as u32).filter(|&g| self.normalizes(g, h)).collect();
        Subgroup::from_sorted(e, self.order())
    }

    /// Some `g` with `a^g = b`, if the subgroups are conjugate.
    pub fn subgroup_conjugator(&self, a: &Subgroup, b: &Subgroup) -> Option<u32> {
        if a.order() != b.order() {
            return None;
        }
        (0..self.order() as u32).find(|&g| a.elements.iter().all(|&x| b.contains(self.conj(x, g))))
    }

    /// Indices in `self` of the elements of `other`, if `other ⊆ self`.
    pub fn embed(&self, other: &Group) -> Option<Subgroup> {
        let mut e = Vec::with_capacity(other.order());
        for p in &other.elements {
            e.push(self.index_of(p)?);
        }
        e.sort_unstable();
        Some(Subgroup::from_sorted(e, self.order()))
    }

    /// The subgroup `h` as a group in its own right (interned by element set).
    pub fn subgroup_group(self: &Arc<Self>, h: &Subgroup) -> Arc<Group> {
        if h.order() == self.order() {
            return self.clone();
        }
        let key: Vec<Permutation> = h.elements.iter().map(|&x| self.elements[x as usize].clone()).collect();
        intern(key, |elements| {
            let m = h.order();
            let mut local = vec![u32::MAX; self.order()];
            for (i, &x) in h.elements.iter().enumerate() {
                local[x as usize] = i as u32;
            }
            let mut mul = vec![0u32; m * m];
            for (i, &a) in h.elements.iter().enumerate() {
                for (j, &b) in h.elements.iter().enumerate() {
                    mul[i * m + j] = local[self.mul(a, b) as usize];
                }
            }
            let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
            Group::assemble(format!("{}.sub{}", self.name, m), self.degree, self.caps, elements, index, mul, None)
        })
    }

    /// The group formed by an arbitrary closed set of permutations.
    pub fn from_closed_set(name: &str, degree: usize, caps: Caps, mut elements: Vec<Permutation>) -> Arc<Group> {
        elements.sort();
        elements.dedup();
        intern(elements, |elements| {
            let index: HashMap<Permutation, u32> =
                elements.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
            let n = elements.len();
            let mut mul = vec![0u32; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    mul[i * n + j] = index[&a.then(b)];
                }
            }
            Group::assemble(name.to_string(), degree, caps, elements, index, mul, None)
        })
    }

    /// `H^g` for `H` given as a group and `g` any permutation of the same degree.
    pub fn conjugate_group(self: &Arc<Self>, g: &Permutation) -> Arc<Group> {
        if self.generators.iter().all(|&s| self.index_of(&self.element(s).conjugate_by(g)).is_some()) {
            return self.clone();
        }
        let e = self.elements.iter().map(|x| x.conjugate_by(g)).collect();
        Group::from_closed_set(&self.name, self.degree, self.caps, e)
    }
}

fn intern(key: Vec<Permutation>, build: impl FnOnce(Vec<Permutation>) -> Group) -> Arc<Group> {
    static REGISTRY: OnceLock<RwLock<HashMap<Vec<Permutation>, Arc<Group>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(Default::default);
    if let Some(g) = reg.read().expect("group registry poisoned").get(&key) {
        return g.clone();
    }
    let built = Arc::new(build(key.clone()));
    reg.write().expect("group registry poisoned").entry(key).or_insert(built).clone()
}

/// A subgroup, as a sorted list of indices into its parent group. The sorted
/// list is the canonical key: equality, hashing and ordering use it.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<u32>,
    bits: Vec<u64>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<u32>, parent_order: usize) -> Self {
        let mut bits = vec![0u64; parent_order.div_ceil(64)];
        for &x in &elements {
            bits[x as usize / 64] |= 1 << (x % 64);
        }
        Subgroup { elements, bits }
    }

    pub fn trivial(parent_order: usize) -> Self {
        Self::from_sorted(vec![0], parent_order)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.get(x as usize / 64).is_some_and(|w| w >> (x % 64) & 1 == 1)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let e: Vec<u32> = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted(e, self.bits.len() * 64)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn trivial_group_from_no_generators() {
        let g = Group::from_generators("1", 3, vec![], Caps::default()).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes().len(), 1);
    }

    #[test]
    fn s3_closure_and_classes() {
        let g = library::s3();
        assert_eq!(g.order(), 6);
        assert!(g.element(0).is_identity());
        let sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        for x in 0..6 {
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }

    #[test]
    fn q8_classes() {
        let g = library::q8();
        let sizes: Vec<usize> = g.classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn order_cap() {
        let s7 = vec![
            Permutation::from_cycles(7, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(),
        ];
        let err = Group::from_generators("S7", 7, s7, Caps::default()).unwrap_err();
        assert!(matches!(err, Error::OrderCapExceeded { cap: 5000 }));
    }

    #[test]
    fn degree_mismatch() {
        let gens = vec![Permutation::identity(3), Permutation::identity(4)];
        assert!(matches!(Group::from_generators("x", 3, gens, Caps::default()), Err(Error::DegreeMismatch(3, 4))));
    }

    #[test]
    fn subgroup_groups_are_interned() {
        let g = library::s4();
        let h = g.generate(&[1]);
        let a = g.subgroup_group(&h);
        let b = g.subgroup_group(&h.clone());
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.order(), h.order());
        assert!(Arc::ptr_eq(&g.subgroup_group(&g.whole()), &g));
    }

    #[test]
    fn normalizer_of_transposition_subgroup() {
        let g = library::s3();
        for c in &g.classes()[1].members {
            let h = g.generate(&[*c]);
            assert_eq!(g.normalizer(&h), h);
        }
        assert_eq!(g.normalizer(&g.whole()), g.whole());
    }
}
