//! π-special and π-factored characters, the normal nucleus recursion and
//! Navarro vertices.
//!
//! Everything here is a pure function of a group, one of its irreducible
//! characters and a set of primes π. Results that are reused heavily (the
//! π-special rows of a table, the vertex of every irreducible character)
//! are memoised per group and per effective π in [`PiCache`].

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::chartab::{inertia_group, irreducibles, Character};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::partial::IpiSet;
use crate::pi::PiSet;

/// Per-(group, π) memo tables.
#[derive(Debug, Default)]
pub struct PiCache {
    special: OnceLock<Arc<Vec<bool>>>,
    vertices: OnceLock<Arc<Vec<NavarroVertex>>>,
    pub(crate) ipi: OnceLock<Arc<IpiSet>>,
    pub(crate) partial_vertices: OnceLock<Arc<Vec<Subgroup>>>,
}

pub(crate) fn pi_cache(g: &Group, pi: &PiSet) -> Arc<PiCache> {
    let key = pi.effective(g.order() as u64);
    g.pi_cache.lock().expect("pi cache poisoned").entry(key).or_default().clone()
}

/// `χ = αβ` with `α` π-special and `β` π′-special.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub alpha: Character,
    pub beta: Character,
}

/// A Navarro vertex `(Q, δ)`: `Q` a π′-subgroup of `G` and `δ ∈ Irr(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NavarroVertex {
    /// `Q` as a subgroup of the ambient group.
    pub q: Subgroup,
    /// `δ`, a character of `Q` viewed as a group in its own right.
    pub delta: Character,
    /// Whether this is the conjugacy-canonical representative.
    pub canonical: bool,
}

impl NavarroVertex {
    pub fn is_linear(&self) -> bool {
        self.delta.is_linear()
    }

    /// Same pair, ignoring the canonical flag.
    pub fn same_pair(&self, other: &NavarroVertex) -> bool {
        self.q == other.q && self.delta == other.delta
    }
}

/// One step of the nucleus recursion: the maximal π-factored normal
/// subgroup `N` of the current group, the chosen constituent `θ`, its
/// inertia group `T` and the Clifford correspondent `ψ ∈ Irr(T)`.
#[derive(Clone, Debug)]
pub struct NucleusStep {
    pub n: Arc<Group>,
    pub theta: Character,
    pub t: Arc<Group>,
    pub psi: Character,
}

/// A normal nucleus `(W, γ)` with the recursion that produced it.
#[derive(Clone, Debug)]
pub struct Nucleus {
    pub w: Arc<Group>,
    pub gamma: Character,
    pub steps: Vec<NucleusStep>,
}

/// Flags, one per row of the character table of `g`, marking the π-special characters.
pub fn pi_special_flags(g: &Arc<Group>, pi: &PiSet) -> Result<Arc<Vec<bool>>> {
    g.require_separable(pi)?;
    let cache = pi_cache(g, pi);
    if let Some(f) = cache.special.get() {
        return Ok(f.clone());
    }
    let irr = irreducibles(g);
    let mut flags: Vec<bool> = irr.iter().map(|chi| pi.is_pi_number(chi.degree())).collect();
    for s in g.subnormal_subgroups()? {
        let sg = g.subgroup_group(&s);
        let bad: Vec<Character> =
            irreducibles(&sg).into_iter().filter(|psi| !pi.is_pi_number(psi.determinant_order())).collect();
        if bad.is_empty() {
            continue;
        }
        for (flag, chi) in flags.iter_mut().zip(&irr) {
            if *flag {
                let res = chi.restrict(&sg);
                *flag = bad.iter().all(|psi| res.inner(psi).is_zero());
            }
        }
    }
    let flags = Arc::new(flags);
    Ok(cache.special.get_or_init(|| flags).clone())
}

/// The π-special irreducible characters of `g`, in table order.
pub fn pi_special_characters(g: &Arc<Group>, pi: &PiSet) -> Result<Vec<Character>> {
    let flags = pi_special_flags(g, pi)?;
    Ok(irreducibles(g).into_iter().zip(flags.iter()).filter(|(_, f)| **f).map(|(c, _)| c).collect())
}

pub fn is_pi_special(chi: &Character, pi: &PiSet) -> Result<bool> {
    let idx = chi.table_index().ok_or_else(|| Error::Input("character is not irreducible".into()))?;
    Ok(pi_special_flags(chi.group(), pi)?[idx])
}

/// The factorisation `χ = αβ`, if `χ` is π-factored.
pub fn pi_factorization(chi: &Character, pi: &PiSet) -> Result<Option<Factorization>> {
    let g = chi.group();
    let alphas = pi_special_characters(g, pi)?;
    let betas = pi_special_characters(g, &pi.complement())?;
    let d = chi.degree();
    let mut found: Option<Factorization> = None;
    for a in &alphas {
        if d % a.degree() != 0 {
            continue;
        }
        for b in betas.iter().filter(|b| a.degree() * b.degree() == d) {
            if a.product(b) == *chi {
                if found.is_some() {
                    return Err(Error::MultipleFactorizations);
                }
                found = Some(Factorization { alpha: a.clone(), beta: b.clone() });
            }
        }
    }
    Ok(found)
}

pub fn is_pi_factored(chi: &Character, pi: &PiSet) -> Result<bool> {
    Ok(pi_factorization(chi, pi)?.is_some())
}

/// The unique maximal normal subgroup `N` such that every irreducible
/// constituent of `χ_N` is π-factored, with those constituents in table order.
pub fn max_factored_normal(chi: &Character, pi: &PiSet) -> Result<(Subgroup, Vec<Character>)> {
    let g = chi.group();
    g.require_separable(pi)?;
    let lat = g.lattice()?;
    let mut good: Vec<(Subgroup, Vec<Character>)> = Vec::new();
    for n in lat.normal_subgroups() {
        let ng = g.subgroup_group(n);
        let constituents: Vec<Character> = chi.restrict(&ng).constituents().into_iter().map(|(c, _)| c).collect();
        let mut all = true;
        for theta in &constituents {
            if !is_pi_factored(theta, pi)? {
                all = false;
                break;
            }
        }
        if all {
            good.push((n.clone(), constituents));
        }
    }
    let maximal: Vec<usize> = (0..good.len())
        .filter(|&i| !good.iter().any(|(m, _)| m.order() > good[i].0.order() && good[i].0.is_subgroup_of(m)))
        .collect();
    if maximal.len() != 1 {
        return Err(Error::Mismatch(format!(
            "{} maximal normal subgroups with pi-factored constituents",
            maximal.len()
        )));
    }
    Ok(good.swap_remove(maximal[0]))
}

/// The Clifford correspondent of `χ` over a constituent `θ` of `χ_N`,
/// `N ◁ G`: the unique `ψ ∈ Irr(G_θ)` over `θ` with `ψ^G = χ`.
pub fn clifford_correspondent(chi: &Character, theta: &Character) -> Result<(Arc<Group>, Character)> {
    let g = chi.group();
    let t_sub = inertia_group(g, theta)?;
    let t = g.subgroup_group(&t_sub);
    let n = theta.group();
    for psi in irreducibles(&t) {
        if psi.restrict(n).inner(theta).is_zero() {
            continue;
        }
        if psi.induce(g) == *chi {
            return Ok((t, psi));
        }
    }
    Err(Error::NoCorrespondent)
}

/// The normal nucleus of `χ`, choosing the first constituent in table order at each level.
pub fn normal_nucleus(chi: &Character, pi: &PiSet) -> Result<Nucleus> {
    let mut steps = Vec::new();
    let mut cur = chi.clone();
    loop {
        if is_pi_factored(&cur, pi)? {
            return Ok(Nucleus { w: cur.group().clone(), gamma: cur, steps });
        }
        let h = cur.group().clone();
        let (n, constituents) = max_factored_normal(&cur, pi)?;
        let theta = constituents.into_iter().next().expect("restriction has a constituent");
        let (t, psi) = clifford_correspondent(&cur, &theta)?;
        if t.order() == h.order() {
            return Err(Error::Mismatch(
                "maximal factored constituent is invariant but character is not factored".into(),
            ));
        }
        steps.push(NucleusStep { n: h.subgroup_group(&n), theta, t, psi: psi.clone() });
        cur = psi;
    }
}

/// Every normal nucleus reachable by some choice of constituent at every level.
pub fn all_normal_nuclei(chi: &Character, pi: &PiSet) -> Result<Vec<(Arc<Group>, Character)>> {
    if is_pi_factored(chi, pi)? {
        return Ok(vec![(chi.group().clone(), chi.clone())]);
    }
    let (_, constituents) = max_factored_normal(chi, pi)?;
    let mut out = Vec::new();
    for theta in constituents {
        let (_, psi) = clifford_correspondent(chi, &theta)?;
        out.extend(all_normal_nuclei(&psi, pi)?);
    }
    Ok(out)
}

/// Some `x ∈ G` with `(H₁, θ₁)^x = (H₂, θ₂)`, for characters of subgroups of `g`.
pub fn pair_conjugator(g: &Group, a: &Character, b: &Character) -> Option<u32> {
    let ha = g.embed(a.group())?;
    let hb = g.embed(b.group())?;
    if ha.order() != hb.order() {
        return None;
    }
    (0..g.order() as u32).find(|&x| g.conjugate_subgroup(&ha, x) == hb && a.conjugate_by(g.element(x)) == *b)
}

/// The raw Navarro vertex read off a nucleus: `Q` a Hall π′-subgroup of `W`
/// and `δ = (γ_π′)_Q`, with `Q` embedded in `g`.
pub fn vertex_from_nucleus(g: &Arc<Group>, nucleus: &Nucleus, pi: &PiSet) -> Result<NavarroVertex> {
    let w = &nucleus.w;
    let fac = pi_factorization(&nucleus.gamma, pi)?
        .ok_or_else(|| Error::Mismatch("nucleus character is not pi-factored".into()))?;
    let q_in_w = w.hall_subgroup(&pi.complement())?;
    let qg = w.subgroup_group(&q_in_w);
    let delta = fac.beta.restrict(&qg);
    let q = g.embed(&qg).expect("nucleus lies in G");
    Ok(NavarroVertex { q, delta, canonical: false })
}

/// Canonical representative of the `G`-orbit of `(Q, δ)`: the conjugate
/// with smallest `(canonical key of Q, values of δ)`.
pub fn canonical_vertex(g: &Arc<Group>, v: &NavarroVertex) -> NavarroVertex {
    let mut best: Option<(Subgroup, Vec<Cyclotomic>, Character)> = None;
    for x in 0..g.order() as u32 {
        let qx = g.conjugate_subgroup(&v.q, x);
        if let Some((bq, _, _)) = &best {
            if qx > *bq {
                continue;
            }
        }
        let dx = conjugate_character_in(g, &v.delta, x);
        let key = (qx, dx.values().to_vec());
        let better = match &best {
            None => true,
            Some((bq, bv, _)) => (&key.0, &key.1) < (bq, bv),
        };
        if better {
            best = Some((key.0, key.1, dx));
        }
    }
    let (q, _, delta) = best.expect("G is non-empty");
    NavarroVertex { q, delta, canonical: true }
}

/// `θ^x` for `θ` a character of a subgroup of `g` and `x` an element index of `g`.
pub fn conjugate_character_in(g: &Arc<Group>, theta: &Character, x: u32) -> Character {
    theta.conjugate_by(g.element(x))
}

/// The canonical Navarro vertex of `χ ∈ Irr(G)`.
pub fn navarro_vertex(chi: &Character, pi: &PiSet) -> Result<NavarroVertex> {
    let g = chi.group();
    let idx = chi.table_index().ok_or_else(|| Error::Input("character is not irreducible".into()))?;
    Ok(navarro_vertices(g, pi)?[idx].clone())
}

/// Canonical Navarro vertices of all irreducible characters of `g`, in table order.
pub fn navarro_vertices(g: &Arc<Group>, pi: &PiSet) -> Result<Arc<Vec<NavarroVertex>>> {
    let cache = pi_cache(g, pi);
    if let Some(v) = cache.vertices.get() {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for chi in irreducibles(g) {
        let nucleus = normal_nucleus(&chi, pi)?;
        out.push(canonical_vertex(g, &vertex_from_nucleus(g, &nucleus, pi)?));
    }
    let out = Arc::new(out);
    Ok(cache.vertices.get_or_init(|| out).clone())
}

/// Whether `δ(x) = δ(y)` whenever `x, y ∈ Q` are conjugate in `G`.
pub fn is_stable(delta: &Character, g: &Group) -> bool {
    let q = delta.group();
    let mut seen: HashMap<usize, &Cyclotomic> = HashMap::new();
    for x in 0..q.order() as u32 {
        let c = g.class_of(g.index_of(q.element(x)).expect("Q lies in G"));
        let v = delta.at(x);
        if let Some(prev) = seen.insert(c, v) {
            if prev != v {
                return false;
            }
        }
    }
    true
}

/// Whether `δ` is invariant under every element of `h` (which normalises its group).
pub fn is_invariant_under(delta: &Character, g: &Arc<Group>, h: &Subgroup) -> bool {
    h.elements().iter().all(|&x| conjugate_character_in(g, delta, x) == *delta)
}

/// All π′-special `α ∈ Irr(G)` with `α_Q = δ`, where `Q` is the group of `δ`.
pub fn pi_prime_special_extensions(delta: &Character, g: &Arc<Group>, pi: &PiSet) -> Result<Vec<Character>> {
    let q = delta.group();
    Ok(pi_special_characters(g, &pi.complement())?
        .into_iter()
        .filter(|a| a.degree() == delta.degree() && a.restrict(q) == *delta)
        .collect())
}

/// The unique π′-special extension of a linear character `δ` of a Hall
/// π′-subgroup `Q`, stable in `G`.
pub fn extend_stable_linear(delta: &Character, g: &Arc<Group>, pi: &PiSet) -> Result<Character> {
    let q = delta.group();
    if !delta.is_linear() {
        return Err(Error::Input("δ is not linear".into()));
    }
    if q.order() as u64 != pi.complement().pi_part(g.order() as u64) || g.embed(q).is_none() {
        return Err(Error::Input("δ is not defined on a Hall π′-subgroup".into()));
    }
    if !is_stable(delta, g) {
        return Err(Error::Input("δ is not stable".into()));
    }
    let mut ext = pi_prime_special_extensions(delta, g, pi)?;
    match ext.len() {
        0 => Err(Error::NoExtension),
        1 => Ok(ext.pop().expect("one extension")),
        k => Err(Error::MultipleExtensions(k)),
    }
}

/// `Irr(G | Q, δ)`: the irreducible characters whose Navarro vertex is `G`-conjugate to `(Q, δ)`.
pub fn irr_with_vertex(g: &Arc<Group>, pi: &PiSet, q: &Subgroup, delta: &Character) -> Result<Vec<Character>> {
    let target = canonical_vertex(g, &NavarroVertex { q: q.clone(), delta: delta.clone(), canonical: false });
    let vertices = navarro_vertices(g, pi)?;
    Ok(irreducibles(g).into_iter().zip(vertices.iter()).filter(|(_, v)| v.same_pair(&target)).map(|(c, _)| c).collect())
}

/// Some `x ∈ G` with `(Q₁, δ₁)^x = (Q₂, δ₂)`.
pub fn vertex_conjugator(g: &Arc<Group>, a: &NavarroVertex, b: &NavarroVertex) -> Option<u32> {
    (0..g.order() as u32)
        .find(|&x| g.conjugate_subgroup(&a.q, x) == b.q && conjugate_character_in(g, &a.delta, x) == b.delta)
}
