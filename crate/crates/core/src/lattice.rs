//! Subgroup lattice, normal structure, π-separability and Hall subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::pi::PiSet;

/// All subgroups of a group, grouped into conjugacy classes.
#[derive(Debug)]
pub struct Lattice {
    /// Sorted by (order, canonical key).
    pub subgroups: Vec<Subgroup>,
    /// Conjugacy classes as sorted index lists into `subgroups`, ordered by
    /// their first member.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Indices of the normal subgroups.
    pub normal: Vec<usize>,
}

impl Lattice {
    fn build(g: &Group) -> Result<Lattice> {
        let cap = g.caps().subgroups;
        let n = g.order() as u32;

        // one generator per cyclic subgroup
        let mut cyclic: HashMap<Subgroup, u32> = HashMap::new();
        for x in 0..n {
            cyclic.entry(g.generate(&[x])).or_insert(x);
        }
        let mut cyclic_gens: Vec<(Subgroup, u32)> = cyclic.into_iter().collect();
        cyclic_gens.sort();

        // extend every known subgroup by every cyclic subgroup outside it
        let mut found: HashMap<Subgroup, Vec<u32>> = HashMap::new();
        let mut queue: Vec<Subgroup> = Vec::new();
        let trivial = g.trivial();
        found.insert(trivial.clone(), Vec::new());
        queue.push(trivial);
        let mut k = 0;
        while k < queue.len() {
            let h = queue[k].clone();
            let gens = found[&h].clone();
            for (c, x) in &cyclic_gens {
                if c.is_subgroup_of(&h) {
                    continue;
                }
                let mut ext = gens.clone();
                ext.push(*x);
                let joined = g.generate(&ext);
                if !found.contains_key(&joined) {
                    if found.len() >= cap {
                        return Err(Error::LatticeCapExceeded { cap });
                    }
                    found.insert(joined.clone(), ext);
                    queue.push(joined);
                }
            }
            k += 1;
        }

        let mut subgroups: Vec<Subgroup> = found.into_keys().collect();
        subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        let position: HashMap<&Subgroup, usize> = subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();

        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![i];
            class_of[i] = id;
            let mut k = 0;
            while k < members.len() {
                let h = &subgroups[members[k]];
                for &s in g.generators() {
                    let j = position[&g.conjugate_subgroup(h, s)];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        let normal = classes.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        Ok(Lattice { subgroups, classes, class_of, normal })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.binary_search_by(|s| s.order().cmp(&h.order()).then_with(|| s.cmp(h))).ok()
    }

    pub fn normal_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.normal.iter().map(|&i| &self.subgroups[i])
    }

    /// First member of each conjugacy class of subgroups.
    pub fn class_representatives(&self) -> impl Iterator<Item = &Subgroup> {
        self.classes.iter().map(|c| &self.subgroups[c[0]])
    }
}

/// A chief series together with its factor orders.
#[derive(Clone, Debug)]
pub struct NormalStructure {
    pub normal: Vec<Subgroup>,
    pub chief_series: Vec<Subgroup>,
}

impl NormalStructure {
    pub fn chief_factor_orders(&self) -> Vec<u64> {
        self.chief_series.windows(2).map(|w| (w[1].order() / w[0].order()) as u64).collect()
    }
}

/// Hall π-subgroups of a π-separable group.
#[derive(Clone, Debug)]
pub struct HallSubgroups {
    /// The member with the smallest canonical key.
    pub representative: Subgroup,
    /// The whole conjugacy class, sorted.
    pub class: Vec<Subgroup>,
}

impl Group {
    pub fn lattice(&self) -> Result<Arc<Lattice>> {
        if let Some(l) = self.lattice.get() {
            if l.len() > self.caps().subgroups {
                return Err(Error::LatticeCapExceeded { cap: self.caps().subgroups });
            }
            return Ok(l.clone());
        }
        let built = Arc::new(Lattice::build(self)?);
        Ok(self.lattice.get_or_init(|| built).clone())
    }

    pub fn normal_structure(&self) -> Result<NormalStructure> {
        let lat = self.lattice()?;
        let normal: Vec<Subgroup> = lat.normal_subgroups().cloned().collect();
        let mut series = vec![self.trivial()];
        loop {
            let cur = series.last().expect("non-empty series");
            if cur.order() == self.order() {
                break;
            }
            let above: Vec<&Subgroup> =
                normal.iter().filter(|m| m.order() > cur.order() && cur.is_subgroup_of(m)).collect();
            let minimal = above
                .iter()
                .filter(|m| !above.iter().any(|l| l.order() < m.order() && l.is_subgroup_of(m)))
                .min()
                .expect("G itself lies above every proper normal subgroup");
            series.push((*minimal).clone());
        }
        Ok(NormalStructure { normal, chief_series: series })
    }

    pub fn is_pi_separable(&self, pi: &PiSet) -> Result<bool> {
        let ns = self.normal_structure()?;
        let pi_c = pi.complement();
        Ok(ns.chief_factor_orders().into_iter().all(|f| pi.is_pi_number(f) || pi_c.is_pi_number(f)))
    }

    pub(crate) fn require_separable(&self, pi: &PiSet) -> Result<()> {
        if self.is_pi_separable(pi)? {
            Ok(())
        } else {
            Err(Error::NotSeparable { group: self.name().to_string(), pi: pi.to_string() })
        }
    }

    pub fn hall_subgroups(&self, pi: &PiSet) -> Result<HallSubgroups> {
        self.require_separable(pi)?;
        let target = pi.pi_part(self.order() as u64) as usize;
        if target == self.order() {
            return Ok(HallSubgroups { representative: self.whole(), class: vec![self.whole()] });
        }
        if target == 1 {
            return Ok(HallSubgroups { representative: self.trivial(), class: vec![self.trivial()] });
        }
        let lat = self.lattice()?;
        let mut class: Vec<Subgroup> = lat.subgroups.iter().filter(|s| s.order() == target).cloned().collect();
        class.sort();
        let first =
            class.first().ok_or_else(|| Error::NotSeparable { group: self.name().to_string(), pi: pi.to_string() })?;
        let cls = lat.class_of[lat.index_of(first).expect("lattice member")];
        if class.iter().any(|s| lat.class_of[lat.index_of(s).expect("lattice member")] != cls) {
            return Err(Error::NotSeparable { group: self.name().to_string(), pi: pi.to_string() });
        }
        Ok(HallSubgroups { representative: first.clone(), class })
    }

    pub fn hall_subgroup(&self, pi: &PiSet) -> Result<Subgroup> {
        Ok(self.hall_subgroups(pi)?.representative)
    }

    /// `(x_π, x_π′)`.
    pub fn pi_parts(&self, x: u32, pi: &PiSet) -> (u32, u32) {
        let n = self.element_order(x);
        let u = pi.pi_part_exponent(n);
        let v = (1 + n - u % n) % n;
        (self.pow(x, u), self.pow(x, v))
    }

    pub fn is_pi_element(&self, x: u32, pi: &PiSet) -> bool {
        pi.is_pi_number(self.element_order(x))
    }

    /// Subnormal subgroups: the closure of "normal in" downward from `G`.
    pub fn subnormal_subgroups(&self) -> Result<Vec<Subgroup>> {
        let lat = self.lattice()?;
        let mut marked = vec![false; lat.len()];
        let top = lat.len() - 1;
        marked[top] = true;
        let mut stack = vec![top];
        while let Some(t) = stack.pop() {
            let tg = &lat.subgroups[t];
            let gens = small_gens(self, tg);
            for (i, s) in lat.subgroups.iter().enumerate() {
                if marked[i] || !s.is_subgroup_of(tg) {
                    continue;
                }
                if gens.iter().all(|&g| self.normalizes(g, s)) {
                    marked[i] = true;
                    stack.push(i);
                }
            }
        }
        Ok(lat.subgroups.iter().zip(marked).filter(|(_, m)| *m).map(|(s, _)| s.clone()).collect())
    }
}

fn small_gens(g: &Group, h: &Subgroup) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut span = g.trivial();
    for &x in h.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = g.generate(&gens);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    /// Oracle: every subgroup is generated by at most two elements in these
    /// small groups, so closing all pairs enumerates the lattice.
    fn pair_closure_count(g: &Group) -> usize {
        let n = g.order() as u32;
        let mut seen = std::collections::HashSet::new();
        for a in 0..n {
            for b in a..n {
                seen.insert(g.generate(&[a, b]));
            }
        }
        seen.len()
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(library::cyclic(2).lattice().unwrap().len(), 2);
        let s3 = library::s3();
        let lat = s3.lattice().unwrap();
        assert_eq!(lat.len(), 6);
        assert_eq!(lat.len(), pair_closure_count(&s3));
        let orders: Vec<usize> = lat.subgroups.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(lat.classes.len(), 4);
        let q8 = library::q8();
        assert_eq!(q8.lattice().unwrap().len(), 6);
        assert_eq!(pair_closure_count(&q8), 6);
        for g in [library::s4(), library::d8(), library::a4(), library::sl23()] {
            assert_eq!(g.lattice().unwrap().len(), pair_closure_count(&g), "{}", g.name());
        }
    }

    #[test]
    fn lattice_cap() {
        let g = Group::from_generators(
            "S4",
            4,
            library::s4().generators().iter().map(|&i| library::s4().element(i).clone()).collect(),
            crate::group::Caps { order: 5000, subgroups: 10 },
        )
        .unwrap();
        assert!(matches!(g.lattice(), Err(Error::LatticeCapExceeded { cap: 10 })));
    }

    #[test]
    fn normal_structure_examples() {
        let s3 = library::s3();
        let ns = s3.normal_structure().unwrap();
        let orders: Vec<usize> = ns.normal.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 3, 6]);
        assert_eq!(ns.chief_factor_orders(), vec![3, 2]);
        // brute-force invariance oracle
        for s in &s3.lattice().unwrap().subgroups {
            let invariant = (0..6).all(|g| s3.conjugate_subgroup(s, g) == *s);
            assert_eq!(invariant, ns.normal.contains(s));
        }
        let q8 = library::q8();
        assert_eq!(q8.normal_structure().unwrap().normal.len(), 6);
        let c5 = library::cyclic(5);
        assert_eq!(c5.normal_structure().unwrap().chief_factor_orders(), vec![5]);
    }

    #[test]
    fn separability() {
        for g in library::default_corpus() {
            for pi in [PiSet::primes([2]), PiSet::primes([3]), PiSet::primes([5]), PiSet::primes([])] {
                assert!(g.is_pi_separable(&pi).unwrap());
            }
        }
        let a5 = library::a5();
        assert!(!a5.is_pi_separable(&PiSet::primes([2])).unwrap());
        assert!(a5.is_pi_separable(&PiSet::primes([2, 3, 5])).unwrap());
        assert!(library::trivial().is_pi_separable(&PiSet::primes([2])).unwrap());
        assert!(matches!(a5.hall_subgroups(&PiSet::primes([2])), Err(Error::NotSeparable { .. })));
    }

    #[test]
    fn hall_examples() {
        let s3 = library::s3();
        let h3 = s3.hall_subgroups(&PiSet::primes([3])).unwrap();
        assert_eq!(h3.representative.order(), 3);
        assert_eq!(h3.class.len(), 1);
        let h2 = s3.hall_subgroups(&PiSet::primes([2])).unwrap();
        assert_eq!(h2.representative.order(), 2);
        assert_eq!(h2.class.len(), 3);
        assert_eq!(s3.hall_subgroup(&PiSet::primes([2, 3, 7])).unwrap(), s3.whole());
        for g in library::default_corpus() {
            for pi in [PiSet::primes([2]), PiSet::primes([3])] {
                let a = g.hall_subgroups(&pi).unwrap();
                let b = g.hall_subgroup(&pi.complement()).unwrap();
                assert_eq!(a.representative.order() * b.order(), g.order());
                for h in &a.class {
                    assert!(g.subgroup_conjugator(&a.representative, h).is_some());
                }
            }
        }
    }

    #[test]
    fn pi_parts_c6() {
        let g = library::c6();
        let x = (0..6).find(|&x| g.element_order(x) == 6).unwrap();
        let (a, b) = g.pi_parts(x, &PiSet::primes([2]));
        assert_eq!(a, g.pow(x, 3));
        assert_eq!(b, g.pow(x, 4));
        assert_eq!(g.pi_parts(0, &PiSet::primes([2])), (0, 0));
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert_eq!(g.pi_parts(t, &PiSet::primes([2])), (t, 0));
    }

    #[test]
    fn pi_parts_unique_decomposition() {
        for g in library::default_corpus() {
            for pi in [PiSet::primes([2]), PiSet::primes([3]), PiSet::primes([2, 5])] {
                let pc = pi.complement();
                for x in 0..g.order() as u32 {
                    let (a, b) = g.pi_parts(x, &pi);
                    assert_eq!(g.mul(a, b), x);
                    assert_eq!(g.mul(b, a), x);
                    assert!(pi.is_pi_number(g.element_order(a)));
                    assert!(pc.is_pi_number(g.element_order(b)));
                    // exhaustive scan over commuting pairs of powers of x
                    let powers: Vec<u32> = (0..g.element_order(x)).map(|k| g.pow(x, k)).collect();
                    let count = powers
                        .iter()
                        .flat_map(|&u| powers.iter().map(move |&v| (u, v)))
                        .filter(|&(u, v)| {
                            g.mul(u, v) == x
                                && pi.is_pi_number(g.element_order(u))
                                && pc.is_pi_number(g.element_order(v))
                        })
                        .count();
                    assert_eq!(count, 1);
                }
            }
        }
    }

    #[test]
    fn subnormals_of_d8_include_noncentral_c2() {
        let d8 = library::d8();
        let sn = d8.subnormal_subgroups().unwrap();
        // every subgroup of a nilpotent group is subnormal
        assert_eq!(sn.len(), d8.lattice().unwrap().len());
        let s3 = library::s3();
        let orders: Vec<usize> = s3.subnormal_subgroups().unwrap().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 3, 6]);
    }
}
