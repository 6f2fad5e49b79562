//! Instance-by-instance verification of the vertex theory on concrete groups.
//!
//! Every check produces [`CheckResult`]s whose witness is plain JSON:
//! subgroups are sorted lists of element indices (into the group's sorted
//! element list), characters are table row indices or class-value arrays.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chartab::dixon::dixon_primes;
use crate::chartab::{inertia_group, irreducibles, linear_characters, Character, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{Caps, Group, Subgroup};
use crate::io::{load_group, Manifest};
use crate::partial::{
    canonical_subgroup, ipi, ipi_cone, ipi_via_vertices, ipi_with_vertex, lifts_of, max_pi_degree_normal,
    partial_constituents, partial_inertia, partial_vertices, pi_classes, restrict_to_pi, vertex_of_partial,
};
use crate::pi::PiSet;
use crate::pistructure::{
    all_normal_nuclei, canonical_vertex, irr_with_vertex, is_invariant_under, is_pi_factored, is_stable,
    max_factored_normal, navarro_vertices, normal_nucleus, pair_conjugator, pi_factorization,
    pi_prime_special_extensions, pi_special_characters, vertex_from_nucleus, NavarroVertex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedPrecondition,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedPrecondition => "skipped-precondition",
        })
    }
}

/// Outcome of one check on one group and one π.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub group: String,
    pub pi: String,
    pub status: Status,
    pub witness: Value,
}

/// The available checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Orthogonality, degree sum and agreement of two Dixon primes.
    Table,
    /// The cone search and the vertex construction give the same `Iπ(G)`.
    IpiDual,
    /// Every choice in the nucleus recursion gives a conjugate nucleus.
    Nucleus,
    /// Restriction is a bijection `Irr(G|Q,δ) → Iπ(G|Q)` for stable linear `δ`.
    TheoremMain,
    /// For `δ = 1_Q` the bijections assemble to the trivial-vertex lifts of `Iπ(G)`.
    TheoremMainTrivialDelta,
    /// Unique lift with vertex `(Q,δ)` when `Q` is normal and `δ` invariant.
    CorUniqueLift,
    /// `|Irr(G|Q,δ)| = |Irr(N_G(Q)|Q,δ)|` when Hall π′-subgroups are nilpotent.
    CorCounts,
    /// Constituents of lifts on normal subgroups are lifts, with equal stabilisers.
    ThmNormalLifts,
    /// The stabiliser clause under the hypothesis "`λ` stable in `G`".
    ThmNormalLiftsStableInG,
    LemmaMaxFactoredNormal,
    LemmaVertexNormal,
    LemmaMaxPiDegreeNormal,
    LemmaVertexRestriction,
    LemmaStableExtension,
    LemmaInvariantLinearFactor,
    LemmaMaximalPair,
    LemmaMaxNormalConverse,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Table,
        Check::IpiDual,
        Check::Nucleus,
        Check::TheoremMain,
        Check::TheoremMainTrivialDelta,
        Check::CorUniqueLift,
        Check::CorCounts,
        Check::ThmNormalLifts,
        Check::ThmNormalLiftsStableInG,
        Check::LemmaMaxFactoredNormal,
        Check::LemmaVertexNormal,
        Check::LemmaMaxPiDegreeNormal,
        Check::LemmaVertexRestriction,
        Check::LemmaStableExtension,
        Check::LemmaInvariantLinearFactor,
        Check::LemmaMaximalPair,
        Check::LemmaMaxNormalConverse,
    ];

    pub const LEMMAS: [Check; 8] = [
        Check::LemmaMaxFactoredNormal,
        Check::LemmaVertexNormal,
        Check::LemmaMaxPiDegreeNormal,
        Check::LemmaVertexRestriction,
        Check::LemmaStableExtension,
        Check::LemmaInvariantLinearFactor,
        Check::LemmaMaximalPair,
        Check::LemmaMaxNormalConverse,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Check::Table => "table",
            Check::IpiDual => "ipi-dual",
            Check::Nucleus => "nucleus",
            Check::TheoremMain => "theorem-main",
            Check::TheoremMainTrivialDelta => "theorem-main-trivial-delta",
            Check::CorUniqueLift => "cor-unique-lift",
            Check::CorCounts => "cor-counts",
            Check::ThmNormalLifts => "thm-normal-lifts",
            Check::ThmNormalLiftsStableInG => "thm-normal-lifts-stable-in-g",
            Check::LemmaMaxFactoredNormal => "lemma-max-factored-normal",
            Check::LemmaVertexNormal => "lemma-vertex-normal",
            Check::LemmaMaxPiDegreeNormal => "lemma-max-pi-degree-normal",
            Check::LemmaVertexRestriction => "lemma-vertex-restriction",
            Check::LemmaStableExtension => "lemma-stable-extension",
            Check::LemmaInvariantLinearFactor => "lemma-invariant-linear-factor",
            Check::LemmaMaximalPair => "lemma-maximal-pair",
            Check::LemmaMaxNormalConverse => "lemma-max-normal-converse",
        }
    }

    /// Parses a comma-separated selector; `all` and `lemmas` name groups of checks.
    pub fn parse_selector(s: &str) -> Result<Vec<Check>> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out.extend(Check::ALL),
                "lemmas" => out.extend(Check::LEMMAS),
                other => {
                    out.insert(other.parse()?);
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| Error::Input(format!("unknown check {s:?}")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn result(check: Check, g: &Group, pi: &PiSet, status: Status, witness: Value) -> CheckResult {
    CheckResult { check: check.id().to_string(), group: g.name().to_string(), pi: pi.to_string(), status, witness }
}

fn skipped(check: Check, g: &Group, pi: &PiSet, reason: &str, mut witness: Value) -> CheckResult {
    if let Value::Object(m) = &mut witness {
        m.insert("reason".into(), reason.into());
    } else {
        witness = json!({ "reason": reason });
    }
    result(check, g, pi, Status::SkippedPrecondition, witness)
}

/// Turns a computation error into a failing result that records the error.
fn settle(check: Check, g: &Group, pi: &PiSet, base: Value, outcome: Result<(bool, Value)>) -> CheckResult {
    let mut witness = base;
    match outcome {
        Ok((ok, extra)) => {
            merge(&mut witness, extra);
            result(check, g, pi, if ok { Status::Pass } else { Status::Fail }, witness)
        }
        Err(e) => {
            merge(&mut witness, json!({ "error": e.to_string() }));
            result(check, g, pi, Status::Fail, witness)
        }
    }
}

fn merge(into: &mut Value, extra: Value) {
    match (into, extra) {
        (Value::Object(a), Value::Object(b)) => a.extend(b),
        (slot, extra) => *slot = extra,
    }
}

fn sub_json(h: &Subgroup) -> Value {
    json!(h.elements())
}

fn char_json(c: &Character) -> Value {
    json!(c.values())
}

fn row(c: &Character) -> usize {
    c.table_index().expect("irreducible character")
}

/// Per-instance outcome of a lemma-style check.
struct Tally {
    instances: Vec<Value>,
    applicable: usize,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: Vec::new(), applicable: 0, failed: 0 }
    }

    fn pass(&mut self, mut item: Value) {
        self.applicable += 1;
        merge(&mut item, json!({ "status": Status::Pass }));
        self.instances.push(item);
    }

    fn fail(&mut self, mut item: Value) {
        self.applicable += 1;
        self.failed += 1;
        merge(&mut item, json!({ "status": Status::Fail }));
        self.instances.push(item);
    }

    fn record(&mut self, ok: bool, item: Value) {
        if ok {
            self.pass(item)
        } else {
            self.fail(item)
        }
    }

    fn skip(&mut self, mut item: Value, reason: &str) {
        merge(&mut item, json!({ "status": Status::SkippedPrecondition, "reason": reason }));
        self.instances.push(item);
    }

    fn finish(self, check: Check, g: &Group, pi: &PiSet) -> CheckResult {
        let status = if self.failed > 0 {
            Status::Fail
        } else if self.applicable > 0 {
            Status::Pass
        } else {
            Status::SkippedPrecondition
        };
        let witness = json!({
            "applicable": self.applicable,
            "failed": self.failed,
            "instances": self.instances,
        });
        result(check, g, pi, status, witness)
    }
}

fn tally_run(check: Check, g: &Group, pi: &PiSet, f: impl FnOnce(&mut Tally) -> Result<()>) -> CheckResult {
    let mut t = Tally::new();
    if let Err(e) = f(&mut t) {
        t.fail(json!({ "error": e.to_string() }));
    }
    t.finish(check, g, pi)
}

/// Whether elements of coprime orders commute, which characterises finite nilpotent groups.
pub fn is_nilpotent(g: &Group) -> bool {
    let n = g.order() as u32;
    (0..n).all(|x| {
        (0..n).all(|y| crate::arith::gcd(g.element_order(x), g.element_order(y)) != 1 || g.mul(x, y) == g.mul(y, x))
    })
}

/// Representatives of the conjugacy classes of π′-subgroups.
pub fn pi_prime_subgroup_classes(g: &Group, pi: &PiSet) -> Result<Vec<Subgroup>> {
    let pc = pi.complement();
    Ok(g.lattice()?.class_representatives().filter(|h| pc.is_pi_number(h.order() as u64)).cloned().collect())
}

fn effective_contains_two(g: &Group, pi: &PiSet) -> bool {
    pi.effective(g.order() as u64).contains(&2)
}

// ---------------------------------------------------------------------------
// table, Iπ and nucleus suites

pub fn verify_table(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    let table = CharacterTable::of(g);
    let base = json!({ "degrees": table.degrees(), "prime": table.prime });
    let outcome = (|| {
        let mut problems = Vec::new();
        if let Err(e) = table.check_orthogonality() {
            problems.push(e);
        }
        let other = dixon_primes(g, 2).into_iter().find(|&q| q != table.prime).expect("two primes");
        let second = CharacterTable::with_prime(g, other)?;
        if !table.same_values(&second) {
            problems.push(format!("tables for primes {} and {other} differ", table.prime));
        }
        Ok((problems.is_empty(), json!({ "second_prime": other, "problems": problems })))
    })();
    settle(Check::Table, g, pi, base, outcome)
}

fn ipi_json(set: &crate::partial::IpiSet) -> Value {
    Value::Array(set.members.iter().zip(&set.lifts).map(|(m, l)| json!({ "values": m, "lifts": l })).collect())
}

pub fn verify_ipi_dual(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    let outcome = (|| {
        let cone = ipi_cone(g, pi)?;
        let via = ipi_via_vertices(g, pi)?;
        let k = pi_classes(g, pi).len();
        let ok = cone == via && cone.len() == k;
        Ok((ok, json!({ "pi_classes": k, "cone": ipi_json(&cone), "via_vertices": ipi_json(&via) })))
    })();
    settle(Check::IpiDual, g, pi, json!({}), outcome)
}

pub fn verify_nucleus(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::Nucleus, g, pi, |t| {
        for chi in irreducibles(g) {
            let i = row(&chi);
            let nucleus = normal_nucleus(&chi, pi)?;
            let mut problems = Vec::new();
            if nucleus.gamma.induce(g) != chi {
                problems.push("γ^G differs from χ".to_string());
            }
            if !is_pi_factored(&nucleus.gamma, pi)? {
                problems.push("γ is not π-factored".to_string());
            }
            let w = g.embed(&nucleus.w).expect("nucleus in G");
            for (level, step) in nucleus.steps.iter().enumerate() {
                let n = g.embed(&step.n).expect("in G");
                let tsub = g.embed(&step.t).expect("in G");
                let ordered = n.is_subgroup_of(&w)
                    && w.is_subgroup_of(&tsub)
                    && !nucleus.gamma.restrict(&step.n).inner(&step.theta).is_zero()
                    && !step.psi.restrict(&nucleus.w).inner(&nucleus.gamma).is_zero();
                if !ordered {
                    problems.push(format!("step {level}: (N,θ) ≤ (W,γ) ≤ (T,ψ) fails"));
                }
            }
            let all = all_normal_nuclei(&chi, pi)?;
            let mut conjugators = Vec::new();
            for (_, gamma) in &all {
                match pair_conjugator(g, &all[0].1, gamma) {
                    Some(x) => conjugators.push(json!(x)),
                    None => {
                        conjugators.push(Value::Null);
                        problems.push("two nuclei are not conjugate".to_string());
                    }
                }
            }
            let item = json!({
                "chi": i,
                "w": sub_json(&w),
                "gamma": char_json(&nucleus.gamma),
                "depth": nucleus.steps.len(),
                "choices": all.len(),
                "conjugators": conjugators,
                "problems": problems,
            });
            t.record(problems.is_empty(), item);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// the bijection and its corollaries

/// Restriction `Irr(G|Q,δ) → Iπ(G|Q)` for a stable linear `δ` of a π′-subgroup `Q`.
pub fn verify_theorem_main(g: &Arc<Group>, pi: &PiSet, q: &Subgroup, delta: &Character) -> CheckResult {
    let check = Check::TheoremMain;
    let base = json!({ "q": sub_json(q), "delta": char_json(delta) });
    if !pi.complement().is_pi_number(q.order() as u64) {
        return skipped(check, g, pi, "Q is not a π′-subgroup", base);
    }
    if !delta.is_linear() {
        return skipped(check, g, pi, "δ is not linear", base);
    }
    if !is_stable(delta, g) {
        return skipped(check, g, pi, "δ is not stable in G", base);
    }
    let outcome = bijection(g, pi, q, delta).map(|b| {
        let ok = b.problems.is_empty();
        (ok, b.witness())
    });
    settle(check, g, pi, base, outcome)
}

struct Bijection {
    /// (table row, Iπ member index)
    pairing: Vec<(usize, usize)>,
    target: Vec<usize>,
    problems: Vec<String>,
}

impl Bijection {
    fn witness(&self) -> Value {
        json!({
            "pairing": self.pairing.iter().map(|(c, p)| json!({ "chi": c, "phi": p })).collect::<Vec<_>>(),
            "ipi_with_vertex": self.target,
            "problems": self.problems,
        })
    }
}

fn bijection(g: &Arc<Group>, pi: &PiSet, q: &Subgroup, delta: &Character) -> Result<Bijection> {
    let set = ipi(g, pi)?;
    let pv = partial_vertices(g, pi)?;
    let qkey = canonical_subgroup(g, q);
    let mut pairing = Vec::new();
    let mut problems = Vec::new();
    for chi in irr_with_vertex(g, pi, q, delta)? {
        let i = row(&chi);
        let phi = restrict_to_pi(&chi, pi);
        match set.position(&phi) {
            None => problems.push(format!("χ{i}⁰ is not irreducible")),
            Some(m) => {
                if pv[m] != qkey {
                    problems.push(format!("χ{i}⁰ does not have vertex Q"));
                }
                pairing.push((i, m));
            }
        }
    }
    let image: BTreeSet<usize> = pairing.iter().map(|&(_, m)| m).collect();
    if image.len() != pairing.len() {
        problems.push("restriction is not injective".into());
    }
    let target: Vec<usize> = ipi_with_vertex(g, pi, q)?.iter().map(|phi| set.position(phi).expect("member")).collect();
    if image != target.iter().copied().collect::<BTreeSet<_>>() {
        problems.push("restriction is not onto Iπ(G|Q)".into());
    }
    Ok(Bijection { pairing, target, problems })
}

/// All `(Q, δ)` instances of the bijection check: `Q` over representatives of
/// π′-subgroup classes, `δ` over the linear characters of `Q`.
pub fn theorem_main_instances(g: &Arc<Group>, pi: &PiSet) -> Result<Vec<(Subgroup, Character)>> {
    let mut out = Vec::new();
    for q in pi_prime_subgroup_classes(g, pi)? {
        let qg = g.subgroup_group(&q);
        for delta in linear_characters(&qg) {
            out.push((q.clone(), delta));
        }
    }
    Ok(out)
}

/// The `δ = 1_Q` bijections, taken over all classes of `Q`, pair `Iπ(G)` with its trivial-vertex lifts.
pub fn verify_theorem_main_trivial_delta(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    let outcome = (|| {
        let set = ipi(g, pi)?;
        let via = ipi_via_vertices(g, pi)?;
        let vertices = navarro_vertices(g, pi)?;
        let mut pairing: Vec<(usize, usize)> = Vec::new();
        let mut problems = Vec::new();
        for q in pi_prime_subgroup_classes(g, pi)? {
            let qg = g.subgroup_group(&q);
            let b = bijection(g, pi, &q, &Character::trivial(&qg))?;
            problems.extend(b.problems);
            pairing.extend(b.pairing);
        }
        pairing.sort_unstable();
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.delta.is_trivial() {
                let phi = restrict_to_pi(&irreducibles(g)[i], pi);
                match via.position(&phi) {
                    Some(m) => expected.push((i, m)),
                    None => problems.push(format!("χ{i}⁰ missing from the vertex construction")),
                }
            }
        }
        expected.sort_unstable();
        if pairing != expected {
            problems.push("bijections differ from the trivial-vertex lifts".into());
        }
        if pairing.len() != set.len() || via != *set {
            problems.push("pairing does not cover Iπ(G)".into());
        }
        let ok = problems.is_empty();
        Ok((
            ok,
            json!({
                "pairing": pairing.iter().map(|(c, p)| json!({ "chi": c, "phi": p })).collect::<Vec<_>>(),
                "problems": problems,
            }),
        ))
    })();
    settle(Check::TheoremMainTrivialDelta, g, pi, json!({}), outcome)
}

/// Unique lifts with vertex `(Q,δ)` for `Q ◁ G` and `δ` a `G`-invariant linear character.
pub fn verify_cor_unique_lift(g: &Arc<Group>, pi: &PiSet, q: &Subgroup, delta: &Character) -> CheckResult {
    let check = Check::CorUniqueLift;
    let base = json!({ "q": sub_json(q), "delta": char_json(delta) });
    if !g.is_normal(q) {
        return skipped(check, g, pi, "Q is not normal in G", base);
    }
    if !pi.complement().is_pi_number(q.order() as u64) {
        return skipped(check, g, pi, "Q is not a π′-subgroup", base);
    }
    if !delta.is_linear() || !is_invariant_under(delta, g, &g.whole()) {
        return skipped(check, g, pi, "δ is not a G-invariant linear character", base);
    }
    let outcome = (|| {
        let set = ipi(g, pi)?;
        let target = canonical_vertex(g, &NavarroVertex { q: q.clone(), delta: delta.clone(), canonical: false });
        let vertices = navarro_vertices(g, pi)?;
        let mut items = Vec::new();
        let mut ok = true;
        for phi in ipi_with_vertex(g, pi, q)? {
            let lifts: Vec<usize> =
                lifts_of(&phi).iter().map(row).filter(|&i| vertices[i].same_pair(&target)).collect();
            ok &= lifts.len() == 1;
            items.push(json!({ "phi": set.position(&phi), "lifts_with_vertex": lifts }));
        }
        Ok((ok, json!({ "non_vacuous": !items.is_empty(), "members": items })))
    })();
    settle(check, g, pi, base, outcome)
}

/// Normal π′-subgroups with their linear characters.
pub fn cor_unique_lift_instances(g: &Arc<Group>, pi: &PiSet) -> Result<Vec<(Subgroup, Character)>> {
    let pc = pi.complement();
    let lat = g.lattice()?;
    let mut out = Vec::new();
    for q in lat.normal_subgroups().filter(|q| pc.is_pi_number(q.order() as u64)) {
        let qg = g.subgroup_group(q);
        for delta in linear_characters(&qg) {
            out.push((q.clone(), delta));
        }
    }
    Ok(out)
}

/// `|Irr(G|Q,δ)| = |Irr(N_G(Q)|Q,δ)|` for stable linear `δ`, given nilpotent Hall π′-subgroups.
pub fn verify_cor_counts(g: &Arc<Group>, pi: &PiSet, q: &Subgroup, delta: &Character) -> CheckResult {
    let check = Check::CorCounts;
    let base = json!({ "q": sub_json(q), "delta": char_json(delta) });
    let hall = match g.hall_subgroup(&pi.complement()) {
        Ok(h) => h,
        Err(e) => return skipped(check, g, pi, &e.to_string(), base),
    };
    if !is_nilpotent(&g.subgroup_group(&hall)) {
        return skipped(check, g, pi, "Hall π′-subgroups are not nilpotent", base);
    }
    if !pi.complement().is_pi_number(q.order() as u64) {
        return skipped(check, g, pi, "Q is not a π′-subgroup", base);
    }
    if !delta.is_linear() || !is_stable(delta, g) {
        return skipped(check, g, pi, "δ is not a G-stable linear character", base);
    }
    let outcome = (|| {
        let in_g = irr_with_vertex(g, pi, q, delta)?;
        let ng = g.subgroup_group(&g.normalizer(q));
        let q_in_n = ng.embed(delta.group()).expect("Q ≤ N_G(Q)");
        let in_n = irr_with_vertex(&ng, pi, &q_in_n, delta)?;
        Ok((
            in_g.len() == in_n.len(),
            json!({
                "normalizer": sub_json(&g.normalizer(q)),
                "count_g": in_g.len(),
                "count_normalizer": in_n.len(),
                "non_vacuous": !in_g.is_empty(),
            }),
        ))
    })();
    settle(check, g, pi, base, outcome)
}

/// Constituents of a lift on a normal subgroup, for `2 ∈ π`.
///
/// With `stable_in_g` the stabiliser clause is tested under "`λ` stable in `G`"
/// instead of "`λ` invariant in `N_G(P)`".
pub fn verify_thm_normal_lifts(
    g: &Arc<Group>,
    pi: &PiSet,
    n: &Subgroup,
    chi: &Character,
    stable_in_g: bool,
) -> CheckResult {
    let check = if stable_in_g { Check::ThmNormalLiftsStableInG } else { Check::ThmNormalLifts };
    let base = json!({ "n": sub_json(n), "chi": chi.table_index() });
    if !effective_contains_two(g, pi) {
        return skipped(check, g, pi, "2 is not in π", base);
    }
    if !g.is_normal(n) {
        return skipped(check, g, pi, "N is not normal in G", base);
    }
    let pre = (|| -> Result<std::result::Result<(NavarroVertex, Subgroup, Character), &'static str>> {
        let set = ipi(g, pi)?;
        if set.position(&restrict_to_pi(chi, pi)).is_none() {
            return Ok(Err("χ is not a lift"));
        }
        let v = navarro_vertices(g, pi)?[row(chi)].clone();
        if !v.delta.is_linear() {
            return Ok(Err("δ is not linear"));
        }
        let p = v.q.intersection(n);
        let pg = g.subgroup_group(&p);
        let lambda = v.delta.restrict(&pg);
        let ng = g.subgroup_group(n);
        if !is_stable(&lambda, &ng) {
            return Ok(Err("λ is not stable in N"));
        }
        Ok(Ok((v, p, lambda)))
    })();
    let (v, p, lambda) = match pre {
        Ok(Ok(x)) => x,
        Ok(Err(reason)) => return skipped(check, g, pi, reason, base),
        Err(e) => return settle(check, g, pi, base, Err(e)),
    };
    let second_clause =
        if stable_in_g { is_stable(&lambda, g) } else { is_invariant_under(&lambda, g, &g.normalizer(&p)) };
    if stable_in_g && !second_clause {
        return skipped(check, g, pi, "λ is not stable in G", base);
    }
    let outcome = (|| {
        let ng = g.subgroup_group(n);
        let set_n = ipi(&ng, pi)?;
        let mut items = Vec::new();
        let mut ok = true;
        for (psi, _) in chi.restrict(&ng).constituents() {
            let psi0 = restrict_to_pi(&psi, pi);
            let lift = set_n.position(&psi0).is_some();
            let mut item = json!({ "psi": row(&psi), "lift": lift });
            ok &= lift;
            if second_clause {
                let gpsi = inertia_group(g, &psi)?;
                let gpsi0 = partial_inertia(g, &psi0);
                ok &= gpsi == gpsi0;
                merge(&mut item, json!({ "stabilizer": sub_json(&gpsi), "partial_stabilizer": sub_json(&gpsi0) }));
            }
            items.push(item);
        }
        Ok((
            ok,
            json!({
                "q": sub_json(&v.q),
                "p": sub_json(&p),
                "stabilizer_clause": second_clause,
                "constituents": items,
            }),
        ))
    })();
    settle(check, g, pi, base, outcome)
}

// ---------------------------------------------------------------------------
// lemmas

/// Unique maximal normal subgroup with π-factored constituents, and the invariant case.
pub fn verify_lemma_max_factored_normal(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaMaxFactoredNormal, g, pi, |t| {
        for chi in irreducibles(g) {
            let (n, cons) = max_factored_normal(&chi, pi)?;
            let mut item = json!({ "chi": row(&chi), "n": sub_json(&n), "constituents": cons.len() });
            let invariant = inertia_group(g, &cons[0])? == g.whole();
            let mut ok = true;
            if invariant {
                ok = n == g.whole() && cons[0] == chi && is_pi_factored(&chi, pi)?;
            }
            merge(&mut item, json!({ "invariant": invariant }));
            t.record(ok, item);
        }
        Ok(())
    })
}

/// Some vertex `Q` of `φ` has `Q ∩ N` a vertex of each constituent `θ` of `φ_N`.
pub fn verify_lemma_vertex_normal(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaVertexNormal, g, pi, |t| {
        let set = ipi(g, pi)?;
        let pv = partial_vertices(g, pi)?;
        let lat = g.lattice()?;
        for (m, phi) in set.members.iter().enumerate() {
            let conjugates: BTreeSet<Subgroup> =
                (0..g.order() as u32).map(|x| g.conjugate_subgroup(&pv[m], x)).collect();
            for n in lat.normal_subgroups() {
                let ng = g.subgroup_group(n);
                for (theta, _) in partial_constituents(phi, &ng)? {
                    let target = vertex_of_partial(&theta)?;
                    let found = conjugates.iter().find(|q| {
                        let meet = g.subgroup_group(&q.intersection(n));
                        let local = ng.embed(&meet).expect("inside N");
                        canonical_subgroup(&ng, &local) == target
                    });
                    t.record(
                        found.is_some(),
                        json!({
                            "phi": m,
                            "n": sub_json(n),
                            "theta": theta,
                            "theta_vertex": sub_json(&target),
                            "q": found.map(sub_json),
                        }),
                    );
                }
            }
        }
        Ok(())
    })
}

/// Unique maximal normal subgroup with constituents of π-degree, and the homogeneous case.
pub fn verify_lemma_max_pi_degree_normal(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaMaxPiDegreeNormal, g, pi, |t| {
        let set = ipi(g, pi)?;
        for (m, phi) in set.members.iter().enumerate() {
            let (n, cons) = max_pi_degree_normal(phi)?;
            let homogeneous = cons.len() == 1;
            let ok = !homogeneous || n == g.whole();
            t.record(ok, json!({ "phi": m, "n": sub_json(&n), "homogeneous": homogeneous }));
        }
        Ok(())
    })
}

/// For `2 ∈ π`: some constituent of `χ_N` has Navarro vertex `(Q ∩ N, δ_{Q∩N})`.
pub fn verify_lemma_vertex_restriction(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    let check = Check::LemmaVertexRestriction;
    if !effective_contains_two(g, pi) {
        return skipped(check, g, pi, "2 is not in π", json!({}));
    }
    tally_run(check, g, pi, |t| {
        let set = ipi(g, pi)?;
        let vertices = navarro_vertices(g, pi)?;
        let lat = g.lattice()?;
        for chi in irreducibles(g) {
            let i = row(&chi);
            if set.position(&restrict_to_pi(&chi, pi)).is_none() {
                continue;
            }
            let v = &vertices[i];
            for n in lat.normal_subgroups() {
                let ng = g.subgroup_group(n);
                let p = v.q.intersection(n);
                let pg = g.subgroup_group(&p);
                let lambda = v.delta.restrict(&pg);
                let local = ng.embed(&pg).expect("inside N");
                let target = canonical_vertex(&ng, &NavarroVertex { q: local, delta: lambda, canonical: false });
                let nv = navarro_vertices(&ng, pi)?;
                let hits: Vec<usize> = chi
                    .restrict(&ng)
                    .constituents()
                    .iter()
                    .map(|(psi, _)| row(psi))
                    .filter(|&j| nv[j].same_pair(&target))
                    .collect();
                t.record(!hits.is_empty(), json!({ "chi": i, "n": sub_json(n), "constituents_with_vertex": hits }));
            }
        }
        Ok(())
    })
}

/// Each stable `δ ∈ Irr(Q)`, `Q` a Hall π′-subgroup, has exactly one π′-special extension.
pub fn verify_lemma_stable_extension(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaStableExtension, g, pi, |t| {
        let q = g.hall_subgroup(&pi.complement())?;
        let qg = g.subgroup_group(&q);
        for delta in irreducibles(&qg) {
            let item = json!({ "q": sub_json(&q), "delta": char_json(&delta) });
            if !is_stable(&delta, g) {
                t.skip(item, "δ is not stable in G");
                continue;
            }
            let ext = pi_prime_special_extensions(&delta, g, pi)?;
            let mut item = item;
            merge(&mut item, json!({ "extensions": ext.iter().map(row).collect::<Vec<_>>() }));
            t.record(ext.len() == 1, item);
        }
        Ok(())
    })
}

/// Constituents on normal subgroups inside a nucleus with stable linear vertex character.
pub fn verify_lemma_invariant_linear_factor(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaInvariantLinearFactor, g, pi, |t| {
        let lat = g.lattice()?;
        for chi in irreducibles(g) {
            let i = row(&chi);
            let nucleus = normal_nucleus(&chi, pi)?;
            let raw = vertex_from_nucleus(g, &nucleus, pi)?;
            let item = json!({ "chi": i, "w": sub_json(&g.embed(&nucleus.w).expect("in G")) });
            if !raw.delta.is_linear() || !is_stable(&raw.delta, g) {
                t.skip(item, "δ is not a G-stable linear character");
                continue;
            }
            let w = g.embed(&nucleus.w).expect("in G");
            for n in lat.normal_subgroups().filter(|n| n.is_subgroup_of(&w)) {
                let ng = g.subgroup_group(n);
                for (theta, _) in nucleus.gamma.restrict(&ng).constituents() {
                    let ok = match pi_factorization(&theta, pi)? {
                        None => false,
                        Some(f) => f.beta.is_linear() && inertia_group(g, &f.beta)? == g.whole(),
                    };
                    let mut it = item.clone();
                    merge(&mut it, json!({ "n": sub_json(n), "theta": row(&theta) }));
                    t.record(ok, it);
                }
            }
        }
        Ok(())
    })
}

/// Whether no π-factored character of a larger normal subgroup lies over `(N, θ)`.
fn is_maximal_factored_pair(g: &Arc<Group>, n: &Subgroup, theta: &Character, pi: &PiSet) -> Result<bool> {
    let lat = g.lattice()?;
    for m in lat.normal_subgroups().filter(|m| m.order() > n.order() && n.is_subgroup_of(m)) {
        let mg = g.subgroup_group(m);
        for sigma in irreducibles(&mg) {
            if !sigma.restrict(theta.group()).inner(theta).is_zero() && is_pi_factored(&sigma, pi)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(N, αβ)` is a maximal π-factored normal pair, with `N` the maximal normal
/// subgroup of π-degree constituents of `φ` and `α` the π-special lift of a constituent.
pub fn verify_lemma_maximal_pair(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaMaximalPair, g, pi, |t| {
        let set = ipi(g, pi)?;
        for (m, phi) in set.members.iter().enumerate() {
            let (n, cons) = max_pi_degree_normal(phi)?;
            let ng = g.subgroup_group(&n);
            let specials = pi_special_characters(&ng, pi)?;
            let betas = pi_special_characters(&ng, &pi.complement())?;
            for (mu, _) in cons {
                let alphas: Vec<&Character> = specials.iter().filter(|a| restrict_to_pi(a, pi) == mu).collect();
                let item = json!({ "phi": m, "n": sub_json(&n), "mu": mu });
                let [alpha] = alphas.as_slice() else {
                    let mut it = item;
                    merge(&mut it, json!({ "pi_special_lifts": alphas.len() }));
                    t.fail(it);
                    continue;
                };
                for beta in &betas {
                    let theta = alpha.product(beta);
                    let ok = theta.is_irreducible()
                        && is_pi_factored(&theta, pi)?
                        && is_maximal_factored_pair(g, &n, &theta, pi)?;
                    let mut it = item.clone();
                    merge(&mut it, json!({ "alpha": row(alpha), "beta": row(beta) }));
                    t.record(ok, it);
                }
            }
        }
        Ok(())
    })
}

/// For a maximal π-factored normal pair `(N,θ)` with `G`-invariant `θ_π′`,
/// `N` is the maximal normal subgroup of π-degree constituents of `χ⁰` for
/// every lift `χ` over `θ` with linear vertex character.
pub fn verify_lemma_max_normal_converse(g: &Arc<Group>, pi: &PiSet) -> CheckResult {
    tally_run(Check::LemmaMaxNormalConverse, g, pi, |t| {
        let set = ipi(g, pi)?;
        let vertices = navarro_vertices(g, pi)?;
        let lat = g.lattice()?;
        let irr = irreducibles(g);
        for n in lat.normal_subgroups() {
            let ng = g.subgroup_group(n);
            for theta in irreducibles(&ng) {
                let Some(f) = pi_factorization(&theta, pi)? else { continue };
                if !is_maximal_factored_pair(g, n, &theta, pi)? {
                    continue;
                }
                let item = json!({ "n": sub_json(n), "theta": row(&theta) });
                if inertia_group(g, &f.beta)? != g.whole() {
                    t.skip(item, "θ_π′ is not G-invariant");
                    continue;
                }
                for chi in &irr {
                    let i = row(chi);
                    if chi.restrict(&ng).inner(&theta).is_zero() || !vertices[i].delta.is_linear() {
                        continue;
                    }
                    let phi = restrict_to_pi(chi, pi);
                    if set.position(&phi).is_none() {
                        continue;
                    }
                    let (m, _) = max_pi_degree_normal(&phi)?;
                    let mut it = item.clone();
                    merge(&mut it, json!({ "chi": i, "max_pi_degree_normal": sub_json(&m) }));
                    t.record(m == *n, it);
                }
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// drivers

/// Runs the selected checks on one group and one π.
pub fn run_checks(g: &Arc<Group>, pi: &PiSet, checks: &[Check]) -> Vec<CheckResult> {
    match g.is_pi_separable(pi) {
        Ok(true) => {}
        Ok(false) => {
            return checks.iter().map(|&c| skipped(c, g, pi, &format!("G is not {pi}-separable"), json!({}))).collect()
        }
        Err(e) => {
            return checks.iter().map(|&c| settle(c, g, pi, json!({}), Err(Error::Input(e.to_string())))).collect()
        }
    }
    let mut out = Vec::new();
    for &check in checks {
        match check {
            Check::Table => out.push(verify_table(g, pi)),
            Check::IpiDual => out.push(verify_ipi_dual(g, pi)),
            Check::Nucleus => out.push(verify_nucleus(g, pi)),
            Check::TheoremMain => match theorem_main_instances(g, pi) {
                Ok(inst) => out.extend(inst.iter().map(|(q, d)| verify_theorem_main(g, pi, q, d))),
                Err(e) => out.push(settle(check, g, pi, json!({}), Err(e))),
            },
            Check::TheoremMainTrivialDelta => out.push(verify_theorem_main_trivial_delta(g, pi)),
            Check::CorUniqueLift => match cor_unique_lift_instances(g, pi) {
                Ok(inst) => out.extend(inst.iter().map(|(q, d)| verify_cor_unique_lift(g, pi, q, d))),
                Err(e) => out.push(settle(check, g, pi, json!({}), Err(e))),
            },
            Check::CorCounts => match theorem_main_instances(g, pi) {
                Ok(inst) => out.extend(inst.iter().map(|(q, d)| verify_cor_counts(g, pi, q, d))),
                Err(e) => out.push(settle(check, g, pi, json!({}), Err(e))),
            },
            Check::ThmNormalLifts | Check::ThmNormalLiftsStableInG => {
                let variant = check == Check::ThmNormalLiftsStableInG;
                if !effective_contains_two(g, pi) {
                    out.push(skipped(check, g, pi, "2 is not in π", json!({})));
                    continue;
                }
                match g.lattice() {
                    Ok(lat) => {
                        for n in lat.normal_subgroups() {
                            for chi in irreducibles(g) {
                                out.push(verify_thm_normal_lifts(g, pi, n, &chi, variant));
                            }
                        }
                    }
                    Err(e) => out.push(settle(check, g, pi, json!({}), Err(e))),
                }
            }
            Check::LemmaMaxFactoredNormal => out.push(verify_lemma_max_factored_normal(g, pi)),
            Check::LemmaVertexNormal => out.push(verify_lemma_vertex_normal(g, pi)),
            Check::LemmaMaxPiDegreeNormal => out.push(verify_lemma_max_pi_degree_normal(g, pi)),
            Check::LemmaVertexRestriction => out.push(verify_lemma_vertex_restriction(g, pi)),
            Check::LemmaStableExtension => out.push(verify_lemma_stable_extension(g, pi)),
            Check::LemmaInvariantLinearFactor => out.push(verify_lemma_invariant_linear_factor(g, pi)),
            Check::LemmaMaximalPair => out.push(verify_lemma_maximal_pair(g, pi)),
            Check::LemmaMaxNormalConverse => out.push(verify_lemma_max_normal_converse(g, pi)),
        }
    }
    out
}

/// Every subset of the primes dividing `|G|`, smallest first.
pub fn pi_sweep(g: &Group) -> Vec<PiSet> {
    let primes = crate::arith::prime_factors(g.order() as u64);
    (0..1u32 << primes.len())
        .map(|mask| PiSet::primes(primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p)))
        .collect()
}

/// Worst status in a list of results.
pub fn overall_status(results: &[CheckResult]) -> Status {
    if results.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    }
}

/// Settings for a corpus run.
#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub checks: Vec<Check>,
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
    /// Caps applied before per-entry overrides.
    pub caps: Caps,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { checks: Check::ALL.to_vec(), jobs: None, caps: Caps::default() }
    }
}

/// All results of a corpus run, in manifest order.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusReport {
    pub results: Vec<CheckResult>,
    pub input_errors: usize,
}

impl CorpusReport {
    /// 0 when everything passed or was skipped, 1 on a failed check, 2 on an input error.
    pub fn exit_code(&self) -> i32 {
        if self.input_errors > 0 {
            2
        } else if overall_status(&self.results) == Status::Fail {
            1
        } else {
            0
        }
    }

    /// Pretty-printed JSON array of the results.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.results).expect("results serialise")
    }
}

fn input_error(entry: &str, e: &Error) -> CheckResult {
    CheckResult {
        check: "load".into(),
        group: entry.into(),
        pi: String::new(),
        status: Status::Fail,
        witness: json!({ "error": e.to_string() }),
    }
}

/// Runs the selected checks on every manifest entry and π-set.
pub fn corpus_run(manifest: &Manifest, opts: &CorpusOptions) -> CorpusReport {
    enum Slot {
        Failed(CheckResult),
        Job(Arc<Group>, PiSet),
    }
    let mut slots = Vec::new();
    let mut input_errors = 0;
    for entry in &manifest.entries {
        let label = entry.file.display().to_string();
        let caps = entry.caps.map_or(opts.caps, |c| c.apply(opts.caps));
        let loaded =
            load_group(&manifest.resolve(entry), caps).and_then(|g| entry.parsed_pi_sets().map(|pis| (g, pis)));
        match loaded {
            Ok((g, pis)) => {
                for pi in pis.unwrap_or_else(|| pi_sweep(&g)) {
                    slots.push(Slot::Job(g.clone(), pi));
                }
            }
            Err(e) => {
                log::error!("{label}: {e}");
                input_errors += 1;
                slots.push(Slot::Failed(input_error(&label, &e)));
            }
        }
    }
    let run = |slot: &Slot| match slot {
        Slot::Failed(r) => vec![r.clone()],
        Slot::Job(g, pi) => {
            log::info!("checking {} with π = {pi}", g.name());
            run_checks(g, pi, &opts.checks)
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let nested: Vec<Vec<CheckResult>> = match builder.build() {
        Ok(pool) => pool.install(|| slots.par_iter().map(run).collect()),
        Err(_) => slots.iter().map(run).collect(),
    };
    CorpusReport { results: nested.into_iter().flatten().collect(), input_errors }
}
