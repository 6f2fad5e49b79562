//! π-partial characters: class functions on the π-elements of a group.
//!
//! [`ipi_cone`] and [`ipi_via_vertices`] compute the irreducible π-partial
//! characters by unrelated methods, one by exhaustive search in the cone of
//! restrictions and one from Navarro vertices with trivial vertex character.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chartab::{irreducibles, Character};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::pi::PiSet;
use crate::pistructure::{navarro_vertices, pi_cache};

/// Indices of the classes of π-elements, in class order.
pub fn pi_classes(g: &Group, pi: &PiSet) -> Vec<usize> {
    g.classes().iter().enumerate().filter(|(_, c)| pi.is_pi_number(c.order)).map(|(i, _)| i).collect()
}

/// A class function on the π-elements of a group.
#[derive(Clone)]
pub struct PartialCharacter {
    group: Arc<Group>,
    pi: PiSet,
    values: Arc<[Cyclotomic]>,
}

impl PartialEq for PartialCharacter {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group
            && self.pi.effective(self.group.order() as u64) == other.pi.effective(other.group.order() as u64)
            && self.values == other.values
    }
}

impl Eq for PartialCharacter {}

impl fmt::Debug for PartialCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]{:?}", self.group.name(), self.pi, self.values)
    }
}

impl PartialCharacter {
    /// Builds a partial character from its values on the π-classes of `group`.
    pub fn new(group: Arc<Group>, pi: &PiSet, values: Vec<Cyclotomic>) -> Result<Self> {
        let pi = pi.clone();
        let k = pi_classes(&group, &pi).len();
        if values.len() != k {
            return Err(Error::Input(format!("expected {k} values, got {}", values.len())));
        }
        Ok(PartialCharacter { group, pi, values: values.into() })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn pi(&self) -> &PiSet {
        &self.pi
    }

    /// Values on the π-classes, in class order.
    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn degree(&self) -> u64 {
        self.values[0].to_i64().expect("degree is an integer") as u64
    }

    /// Value at the element with index `x`, if it is a π-element.
    pub fn at(&self, x: u32) -> Option<&Cyclotomic> {
        let c = self.group.class_of(x);
        let pos = pi_classes(&self.group, &self.pi).binary_search(&c).ok()?;
        Some(&self.values[pos])
    }

    /// Restriction to a subgroup of the ambient group.
    pub fn restrict(&self, h: &Arc<Group>) -> PartialCharacter {
        let g = &self.group;
        let lookup = class_lookup(g, &self.pi);
        let values = pi_classes(h, &self.pi)
            .into_iter()
            .map(|c| {
                let x = g.index_of(h.element(h.classes()[c].representative)).expect("subgroup element");
                self.values[lookup[g.class_of(x)].expect("π-element")].clone()
            })
            .collect();
        PartialCharacter { group: h.clone(), pi: self.pi.clone(), values }
    }

    /// Induction to an overgroup, evaluated on π-classes only.
    pub fn induce(&self, g: &Arc<Group>) -> PartialCharacter {
        let h = &self.group;
        let pi = self.pi.clone();
        let lookup = class_lookup(h, &self.pi);
        let mut sums = vec![Cyclotomic::zero(); g.class_count()];
        for (y, p) in h.elements().iter().enumerate() {
            if let Some(pos) = lookup[h.class_of(y as u32)] {
                let x = g.index_of(p).expect("subgroup of the target group");
                sums[g.class_of(x)] += &self.values[pos];
            }
        }
        let values = pi_classes(g, &pi)
            .into_iter()
            .map(|c| {
                let size = g.classes()[c].size();
                sums[c].scale(&Rational::new((g.order() as i64).into(), ((h.order() * size) as i64).into()))
            })
            .collect();
        PartialCharacter { group: g.clone(), pi, values }
    }

    /// `φ^x`, defined on `H^x`.
    pub fn conjugate_by(&self, x: &crate::perm::Permutation) -> PartialCharacter {
        let h = &self.group;
        let hx = h.conjugate_group(x);
        let xinv = x.inverse();
        let values = pi_classes(&hx, &self.pi)
            .into_iter()
            .map(|c| {
                let y = hx.element(hx.classes()[c].representative);
                let back = h.index_of(&y.conjugate_by(&xinv)).expect("conjugate lies in H");
                self.at(back).expect("π-element").clone()
            })
            .collect();
        PartialCharacter { group: hx, pi: self.pi.clone(), values }
    }

    /// Rational coordinates of the values, for linear algebra.
    fn coordinates(&self) -> Vec<Rational> {
        let m = self.group.exponent() as u32;
        self.values.iter().flat_map(|v| v.coordinates_in(m).expect("values lie in Q(ζ_exp)")).collect()
    }
}

impl Serialize for PartialCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

fn class_lookup(g: &Group, pi: &PiSet) -> Vec<Option<usize>> {
    let mut lookup = vec![None; g.class_count()];
    for (pos, c) in pi_classes(g, pi).into_iter().enumerate() {
        lookup[c] = Some(pos);
    }
    lookup
}

/// `χ⁰`, the restriction of `χ` to π-elements.
pub fn restrict_to_pi(chi: &Character, pi: &PiSet) -> PartialCharacter {
    let g = chi.group().clone();
    let pi = pi.clone();
    let values = pi_classes(&g, &pi).into_iter().map(|c| chi.value(c).clone()).collect();
    PartialCharacter { group: g, pi, values }
}

/// The irreducible π-partial characters of a group, each with its lifts
/// (table indices of the `χ ∈ Irr(G)` with `χ⁰` equal to it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpiSet {
    pub members: Vec<PartialCharacter>,
    pub lifts: Vec<Vec<usize>>,
}

impl IpiSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, phi: &PartialCharacter) -> Option<usize> {
        self.members.iter().position(|m| m == phi)
    }

    fn sorted(mut pairs: Vec<(PartialCharacter, Vec<usize>)>) -> IpiSet {
        pairs.sort_by_key(|(_, lifts)| lifts[0]);
        let (members, lifts) = pairs.into_iter().unzip();
        IpiSet { members, lifts }
    }
}

/// Distinct restrictions `χ⁰`, with the table indices restricting to each, in order of first appearance.
fn distinct_restrictions(g: &Arc<Group>, pi: &PiSet) -> Vec<(PartialCharacter, Vec<usize>)> {
    let mut out: Vec<(PartialCharacter, Vec<usize>)> = Vec::new();
    for (i, chi) in irreducibles(g).iter().enumerate() {
        let phi = restrict_to_pi(chi, pi);
        match out.iter_mut().find(|(p, _)| *p == phi) {
            Some((_, lifts)) => lifts.push(i),
            None => out.push((phi, vec![i])),
        }
    }
    out
}

/// `Iπ(G)` by exhaustive search in the cone of restrictions.
pub fn ipi_cone(g: &Arc<Group>, pi: &PiSet) -> Result<IpiSet> {
    g.require_separable(pi)?;
    let mut restrictions = distinct_restrictions(g, pi);
    restrictions.sort_by_key(|(phi, _)| phi.degree());
    let mut irreducible: Vec<(PartialCharacter, Vec<usize>, Vec<Rational>)> = Vec::new();
    for (phi, lifts) in restrictions {
        let target = phi.coordinates();
        let smaller: Vec<(u64, &Vec<Rational>)> =
            irreducible.iter().filter(|(p, _, _)| p.degree() < phi.degree()).map(|(p, _, c)| (p.degree(), c)).collect();
        if !in_cone(&target, phi.degree(), &smaller) {
            irreducible.push((phi, lifts, target));
        }
    }
    let k = pi_classes(g, pi).len();
    if irreducible.len() != k {
        return Err(Error::ConeDecompositionFailure(format!(
            "{} irreducible partial characters for {k} π-classes",
            irreducible.len()
        )));
    }
    let coords: Vec<Vec<Rational>> = irreducible.iter().map(|(_, _, c)| c.clone()).collect();
    if rank(&coords) != k {
        return Err(Error::ConeDecompositionFailure("members are linearly dependent".into()));
    }
    Ok(IpiSet::sorted(irreducible.into_iter().map(|(p, l, _)| (p, l)).collect()))
}

/// Whether `target` (of degree `degree`) is a nonnegative integer
/// combination of the `(degree, coordinates)` generators.
fn in_cone(target: &[Rational], degree: u64, gens: &[(u64, &Vec<Rational>)]) -> bool {
    fn go(rest: &mut Vec<Rational>, degree: u64, gens: &[(u64, &Vec<Rational>)]) -> bool {
        if degree == 0 {
            return rest.iter().all(Zero::is_zero);
        }
        let Some(((d, v), tail)) = gens.split_first() else { return false };
        let max = degree / d;
        for a in 0..=max {
            if go(rest, degree - a * d, tail) {
                return true;
            }
            if a < max {
                for (r, x) in rest.iter_mut().zip(v.iter()) {
                    *r -= x;
                }
            }
        }
        // undo the `max` subtractions
        for (r, x) in rest.iter_mut().zip(v.iter()) {
            *r += x * Rational::from_integer(max.into());
        }
        false
    }
    let mut rest = target.to_vec();
    go(&mut rest, degree, gens)
}

/// Rank of a list of rational vectors.
fn rank(vectors: &[Vec<Rational>]) -> usize {
    row_reduce(vectors.to_vec()).len()
}

/// Reduced row echelon form, dropping zero rows.
fn row_reduce(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..width {
                    let sub = &f * &rows[r][c];
                    rows[i][c] -= sub;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Coefficients of `target` in the basis `basis`, if it lies in their span.
fn solve(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = basis.len();
    // augmented system: one row per coordinate, columns = basis members + target
    let rows: Vec<Vec<Rational>> = (0..target.len())
        .map(|i| basis.iter().map(|b| b[i].clone()).chain(std::iter::once(target[i].clone())).collect())
        .collect();
    let red = row_reduce(rows);
    let mut x = vec![Rational::zero(); n];
    for row in &red {
        let lead = row.iter().position(|v| !v.is_zero())?;
        if lead == n {
            return None;
        }
        x[lead] = row[n].clone();
    }
    Some(x)
}

/// `Iπ(G)` as the restrictions of the characters whose Navarro vertex
/// character is trivial.
pub fn ipi_via_vertices(g: &Arc<Group>, pi: &PiSet) -> Result<IpiSet> {
    let vertices = navarro_vertices(g, pi)?;
    let all = distinct_restrictions(g, pi);
    let mut out: Vec<(PartialCharacter, Vec<usize>)> = Vec::new();
    for (i, chi) in irreducibles(g).iter().enumerate() {
        if !vertices[i].delta.is_trivial() {
            continue;
        }
        let phi = restrict_to_pi(chi, pi);
        if out.iter().any(|(p, _)| *p == phi) {
            return Err(Error::Mismatch(format!("two trivial-vertex characters restrict to {phi:?}")));
        }
        let lifts = all.iter().find(|(p, _)| *p == phi).expect("restriction listed").1.clone();
        out.push((phi, lifts));
    }
    Ok(IpiSet::sorted(out))
}

/// `Iπ(G)`, memoised per group and π.
pub fn ipi(g: &Arc<Group>, pi: &PiSet) -> Result<Arc<IpiSet>> {
    let cache = pi_cache(g, pi);
    if let Some(s) = cache.ipi.get() {
        return Ok(s.clone());
    }
    let set = Arc::new(ipi_cone(g, pi)?);
    Ok(cache.ipi.get_or_init(|| set).clone())
}

/// Decomposition of a π-partial character over `Iπ` of its group:
/// nonnegative integer multiplicities, one per member.
pub fn decompose_partial(phi: &PartialCharacter) -> Result<Vec<u64>> {
    let set = ipi(phi.group(), phi.pi())?;
    let basis: Vec<Vec<Rational>> = set.members.iter().map(PartialCharacter::coordinates).collect();
    let x = solve(&basis, &phi.coordinates())
        .ok_or_else(|| Error::ConeDecompositionFailure(format!("{phi:?} is outside the span of Iπ")))?;
    x.into_iter()
        .map(|a| {
            if a.is_integer() && !a.is_negative() {
                Ok(a.to_integer().to_u64().expect("small multiplicity"))
            } else {
                Err(Error::ConeDecompositionFailure(format!("coefficient {a} in decomposition of {phi:?}")))
            }
        })
        .collect()
}

/// Constituents of `φ_N` in `Iπ(N)`, with multiplicities.
pub fn partial_constituents(phi: &PartialCharacter, n: &Arc<Group>) -> Result<Vec<(PartialCharacter, u64)>> {
    let res = phi.restrict(n);
    let mult = decompose_partial(&res)?;
    let set = ipi(n, phi.pi())?;
    Ok(set.members.iter().cloned().zip(mult).filter(|(_, m)| *m > 0).collect())
}

/// All `χ ∈ Irr(G)` with `χ⁰ = φ`.
pub fn lifts_of(phi: &PartialCharacter) -> Vec<Character> {
    irreducibles(phi.group()).into_iter().filter(|chi| restrict_to_pi(chi, phi.pi()) == *phi).collect()
}

/// The unique maximal normal `N` such that every constituent of `φ_N` has π-degree,
/// with those constituents.
pub fn max_pi_degree_normal(phi: &PartialCharacter) -> Result<(Subgroup, Vec<(PartialCharacter, u64)>)> {
    let g = phi.group();
    let pi = phi.pi();
    let lat = g.lattice()?;
    let mut good = Vec::new();
    for n in lat.normal_subgroups() {
        let ng = g.subgroup_group(n);
        let cons = partial_constituents(phi, &ng)?;
        if cons.iter().all(|(t, _)| pi.is_pi_number(t.degree())) {
            good.push((n.clone(), cons));
        }
    }
    let maximal: Vec<usize> = (0..good.len())
        .filter(|&i| !good.iter().any(|(m, _)| m.order() > good[i].0.order() && good[i].0.is_subgroup_of(m)))
        .collect();
    if maximal.len() != 1 {
        return Err(Error::Mismatch(format!("{} maximal normal subgroups with π-degree constituents", maximal.len())));
    }
    Ok(good.swap_remove(maximal[0]))
}

/// Canonical representative (smallest key) of the `G`-class of `h`.
pub fn canonical_subgroup(g: &Group, h: &Subgroup) -> Subgroup {
    (0..g.order() as u32).map(|x| g.conjugate_subgroup(h, x)).min().expect("G is non-empty")
}

/// Every vertex witness of `φ ∈ Iπ(G)`: Hall π′-subgroups of the subgroup
/// class representatives `U` carrying some `μ ∈ Iπ(U)` of π-degree with `μ^G = φ`.
pub fn vertex_witnesses(phi: &PartialCharacter) -> Result<Vec<Subgroup>> {
    let g = phi.group();
    let pi = phi.pi();
    let lat = g.lattice()?;
    let mut out = Vec::new();
    for u in lat.class_representatives() {
        let index = (g.order() / u.order()) as u64;
        if phi.degree() % index != 0 || !pi.is_pi_number(phi.degree() / index) {
            continue;
        }
        let ug = g.subgroup_group(u);
        let set = ipi(&ug, pi)?;
        for mu in &set.members {
            if mu.degree() * index == phi.degree() && mu.induce(g) == *phi {
                let q = ug.hall_subgroup(&pi.complement())?;
                let qg = ug.subgroup_group(&q);
                out.push(g.embed(&qg).expect("subgroup of G"));
                break;
            }
        }
    }
    Ok(out)
}

/// The vertex of `φ ∈ Iπ(G)`, as the canonical member of its conjugacy class.
pub fn vertex_of_partial(phi: &PartialCharacter) -> Result<Subgroup> {
    let g = phi.group();
    let witnesses = vertex_witnesses(phi)?;
    let first = witnesses.first().ok_or(Error::NoVertexFound)?;
    for w in &witnesses[1..] {
        if g.subgroup_conjugator(first, w).is_none() {
            return Err(Error::Mismatch(format!("non-conjugate vertices {first:?} and {w:?}")));
        }
    }
    Ok(canonical_subgroup(g, first))
}

/// Canonical vertices of all members of `Iπ(G)`, memoised, in member order.
pub fn partial_vertices(g: &Arc<Group>, pi: &PiSet) -> Result<Arc<Vec<Subgroup>>> {
    let cache = pi_cache(g, pi);
    if let Some(v) = cache.partial_vertices.get() {
        return Ok(v.clone());
    }
    let set = ipi(g, pi)?;
    let v = Arc::new(set.members.iter().map(vertex_of_partial).collect::<Result<Vec<_>>>()?);
    Ok(cache.partial_vertices.get_or_init(|| v).clone())
}

/// `Iπ(G|Q)`: members of `Iπ(G)` whose vertex is conjugate to `q`.
pub fn ipi_with_vertex(g: &Arc<Group>, pi: &PiSet, q: &Subgroup) -> Result<Vec<PartialCharacter>> {
    let set = ipi(g, pi)?;
    let vertices = partial_vertices(g, pi)?;
    let key = canonical_subgroup(g, q);
    Ok(set.members.iter().zip(vertices.iter()).filter(|(_, v)| **v == key).map(|(m, _)| m.clone()).collect())
}

/// `G_φ` for a partial character of a normal subgroup.
pub fn partial_inertia(g: &Arc<Group>, phi: &PartialCharacter) -> Subgroup {
    let stab = (0..g.order() as u32).filter(|&x| phi.conjugate_by(g.element(x)) == *phi).collect();
    g.subgroup_from_elements(stab)
}

impl PartialCharacter {
    /// The trivial partial character.
    pub fn trivial(g: &Arc<Group>, pi: &PiSet) -> PartialCharacter {
        restrict_to_pi(&Character::trivial(g), pi)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_one)
    }
}
