//! Exact ordinary character tables and the character calculus.

pub mod dixon;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::lcm;
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::Result;
use crate::group::{Group, Subgroup};
use crate::perm::Permutation;

/// Irreducible character values cached on a [`Group`], rows in table order.
#[derive(Debug)]
pub struct TableData {
    pub rows: Vec<Arc<[Cyclotomic]>>,
    pub prime: u64,
}

/// A class function on a group, one value per conjugacy class.
#[derive(Clone)]
pub struct Character {
    group: Arc<Group>,
    values: Arc<[Cyclotomic]>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.values == other.values
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character[{}]{:?}", self.group.order(), self.values)
    }
}

impl Character {
    pub fn new(group: Arc<Group>, values: Vec<Cyclotomic>) -> Self {
        assert_eq!(values.len(), group.class_count(), "one value per class");
        Character { group, values: values.into() }
    }

    pub fn trivial(group: &Arc<Group>) -> Self {
        Self::new(group.clone(), vec![Cyclotomic::one(); group.class_count()])
    }

    pub fn regular(group: &Arc<Group>) -> Self {
        let mut v = vec![Cyclotomic::zero(); group.class_count()];
        v[0] = Cyclotomic::from_int(group.order() as i64);
        Self::new(group.clone(), v)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    /// Value at an element index of the underlying group.
    pub fn at(&self, x: u32) -> &Cyclotomic {
        &self.values[self.group.class_of(x)]
    }

    /// Value at a permutation, if it lies in the group.
    pub fn at_perm(&self, p: &Permutation) -> Option<&Cyclotomic> {
        self.group.index_of(p).map(|x| self.at(x))
    }

    pub fn degree(&self) -> u64 {
        self.values[0].to_integer().and_then(|d| d.to_u64()).expect("character degree is a non-negative integer")
    }

    pub fn is_linear(&self) -> bool {
        self.values[0].is_one()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_one)
    }

    /// `(1/|G|) Σ_g χ(g) conj(ψ(g))`.
    pub fn inner(&self, other: &Character) -> Cyclotomic {
        assert!(*self.group == *other.group, "inner product across groups");
        let mut acc = Cyclotomic::zero();
        for (c, cl) in self.group.classes().iter().enumerate() {
            let term = &self.values[c] * &other.values[c].conjugate();
            acc += &term.scale(&Rational::from_integer(BigInt::from(cl.size())));
        }
        acc.scale(&Rational::new(BigInt::from(1), BigInt::from(self.group.order())))
    }

    /// Inner product of two characters, which is rational.
    pub fn inner_product(&self, other: &Character) -> Rational {
        self.inner(other).to_rational().expect("inner product of characters is rational")
    }

    /// Integer inner product, for use where both sides are characters.
    pub fn multiplicity(&self, other: &Character) -> u64 {
        let q = self.inner_product(other);
        assert!(q.is_integer(), "non-integral multiplicity {q}");
        q.to_integer().to_u64().expect("non-negative multiplicity")
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner(self).is_one()
    }

    /// Restriction to a group whose elements all lie in this character's group.
    pub fn restrict(&self, h: &Arc<Group>) -> Character {
        if Arc::ptr_eq(h, &self.group) || **h == *self.group {
            return Character { group: h.clone(), values: self.values.clone() };
        }
        let values = h
            .classes()
            .iter()
            .map(|cl| self.at_perm(h.element(cl.representative)).expect("restriction to a non-subgroup").clone())
            .collect();
        Character::new(h.clone(), values)
    }

    pub fn restrict_to(&self, h: &Subgroup) -> Character {
        self.restrict(&self.group.subgroup_group(h))
    }

    /// Induced class function `θ^G` via `θ^G(g) = |C_G(g)|/|H| Σ_{h ∈ H ∩ g^G} θ(h)`.
    pub fn induce(&self, g: &Arc<Group>) -> Character {
        let h = &self.group;
        if **h == **g {
            return Character { group: g.clone(), values: self.values.clone() };
        }
        let mut sums = vec![Cyclotomic::zero(); g.class_count()];
        let mut counts = vec![0usize; h.class_count()];
        let mut target = vec![usize::MAX; h.class_count()];
        for x in 0..h.order() as u32 {
            let c = h.class_of(x);
            counts[c] += 1;
            if target[c] == usize::MAX {
                target[c] = g.class_of(g.index_of(h.element(x)).expect("induction from a non-subgroup"));
            }
        }
        for c in 0..h.class_count() {
            if !self.values[c].is_zero() {
                let term = self.values[c].scale(&Rational::from_integer(BigInt::from(counts[c])));
                sums[target[c]] += &term;
            }
        }
        let values = sums
            .into_iter()
            .zip(g.classes())
            .map(|(s, cl)| s.scale(&Rational::new(BigInt::from(g.order()), BigInt::from(h.order() * cl.size()))))
            .collect();
        Character::new(g.clone(), values)
    }

    pub fn product(&self, other: &Character) -> Character {
        assert!(*self.group == *other.group, "product across groups");
        let values = self.values.iter().zip(other.values.iter()).map(|(a, b)| a * b).collect();
        Character::new(self.group.clone(), values)
    }

    pub fn sum(&self, other: &Character) -> Character {
        assert!(*self.group == *other.group, "sum across groups");
        let values = self.values.iter().zip(other.values.iter()).map(|(a, b)| a + b).collect();
        Character::new(self.group.clone(), values)
    }

    pub fn complex_conjugate(&self) -> Character {
        Character::new(self.group.clone(), self.values.iter().map(Cyclotomic::conjugate).collect())
    }

    /// `det χ`, from the power sums `χ(g^k)` of the eigenvalues via Newton's identities.
    pub fn determinant(&self) -> Character {
        let d = self.degree() as usize;
        let g = &self.group;
        let values = (0..g.class_count())
            .map(|c| {
                let power_sums: Vec<Cyclotomic> =
                    (1..=d as u64).map(|k| self.values[g.class_power(c, k)].clone()).collect();
                let mut e = vec![Cyclotomic::one()];
                for k in 1..=d {
                    let mut acc = Cyclotomic::zero();
                    for i in 1..=k {
                        let term = &e[k - i] * &power_sums[i - 1];
                        acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
                    }
                    e.push(acc.scale(&Rational::new(BigInt::from(1), BigInt::from(k))));
                }
                e.pop().expect("non-empty")
            })
            .collect();
        Character::new(g.clone(), values)
    }

    /// Multiplicative order of `det χ` among the linear characters.
    pub fn determinant_order(&self) -> u64 {
        let det = if self.is_linear() { self.clone() } else { self.determinant() };
        det.values.iter().fold(1, |acc, v| {
            lcm(acc, v.root_of_unity_order().expect("linear character values are roots of unity") as u64)
        })
    }

    /// `θ^g`, defined on `H^g` by `θ^g(x^g) = θ(x)`.
    pub fn conjugate_by(&self, g: &Permutation) -> Character {
        let h = &self.group;
        let hg = h.conjugate_group(g);
        let ginv = g.inverse();
        let values = hg
            .classes()
            .iter()
            .map(|cl| {
                let y = hg.element(cl.representative);
                // y = x^g  ⇔  x = g y g⁻¹
                self.at_perm(&y.conjugate_by(&ginv)).expect("conjugate lies in H").clone()
            })
            .collect();
        Character::new(hg, values)
    }

    /// Multiplicities of the irreducible characters of the group, by table row.
    pub fn decompose(&self) -> Vec<u64> {
        irreducibles(&self.group).iter().map(|chi| self.multiplicity(chi)).collect()
    }

    /// Irreducible constituents (with multiplicity) of this character.
    pub fn constituents(&self) -> Vec<(Character, u64)> {
        irreducibles(&self.group).into_iter().zip(self.decompose()).filter(|(_, m)| *m > 0).collect()
    }

    /// Index of this character in its group's table, if irreducible.
    pub fn table_index(&self) -> Option<usize> {
        table_data(&self.group).rows.iter().position(|r| **r == *self.values)
    }
}

fn table_data(g: &Arc<Group>) -> Arc<TableData> {
    g.table
        .get_or_init(|| {
            let primes = dixon::dixon_primes(g, 8);
            let mut last = None;
            for q in primes {
                match dixon::dixon_table(g, q) {
                    Ok(rows) => return Arc::new(TableData { rows: sort_rows(rows), prime: q }),
                    Err(e) => last = Some(e),
                }
            }
            panic!("Dixon's method failed for {}: {:?}", g.name(), last)
        })
        .clone()
}

pub(crate) fn sort_rows(rows: Vec<Vec<Cyclotomic>>) -> Vec<Arc<[Cyclotomic]>> {
    let mut rows = rows;
    rows.sort_by(|a, b| {
        let da = a[0].to_integer().unwrap_or_default();
        let db = b[0].to_integer().unwrap_or_default();
        da.cmp(&db).then_with(|| {
            a.iter().zip(b).map(|(x, y)| table_value_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    rows.into_iter().map(Arc::from).collect()
}

/// Value order used for sorting rows: rationals first (descending), then
/// irrationals by conductor and coefficients. The trivial character comes
/// first among the linear ones.
fn table_value_cmp(a: &Cyclotomic, b: &Cyclotomic) -> std::cmp::Ordering {
    match (a.is_rational(), b.is_rational()) {
        (true, true) => b.cmp(a),
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        (false, false) => a.cmp(b),
    }
}

/// Installs a table computed elsewhere (e.g. loaded from the on-disk cache).
pub fn install_table(g: &Arc<Group>, rows: Vec<Vec<Cyclotomic>>, prime: u64) -> bool {
    g.table.set(Arc::new(TableData { rows: sort_rows(rows), prime })).is_ok()
}

/// The irreducible characters of a group, in table order.
pub fn irreducibles(g: &Arc<Group>) -> Vec<Character> {
    table_data(g).rows.iter().map(|r| Character { group: g.clone(), values: r.clone() }).collect()
}

pub fn linear_characters(g: &Arc<Group>) -> Vec<Character> {
    irreducibles(g).into_iter().filter(Character::is_linear).collect()
}

/// The exact character table of a group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: Arc<Group>,
    pub rows: Vec<Character>,
    pub prime: u64,
}

impl CharacterTable {
    pub fn of(g: &Arc<Group>) -> CharacterTable {
        let data = table_data(g);
        CharacterTable { group: g.clone(), rows: irreducibles(g), prime: data.prime }
    }

    /// Recomputes the table with a specific Dixon prime, bypassing the cache.
    pub fn with_prime(g: &Arc<Group>, q: u64) -> Result<CharacterTable> {
        let rows = sort_rows(dixon::dixon_table(g, q)?)
            .into_iter()
            .map(|r| Character { group: g.clone(), values: r })
            .collect();
        Ok(CharacterTable { group: g.clone(), rows, prime: q })
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.rows.iter().map(Character::degree).collect()
    }

    /// Both orthogonality relations and `Σ χ(1)² = |G|`, checked exactly.
    pub fn check_orthogonality(&self) -> std::result::Result<(), String> {
        let g = &self.group;
        let k = g.class_count();
        if self.rows.len() != k {
            return Err(format!("{} rows for {k} classes", self.rows.len()));
        }
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate() {
                let ip = a.inner(b);
                let expect = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if ip != expect {
                    return Err(format!("<χ{i}, χ{j}> = {ip}"));
                }
            }
        }
        for c in 0..k {
            for d in 0..k {
                let s: Cyclotomic = self.rows.iter().map(|chi| chi.value(c) * &chi.value(d).conjugate()).sum();
                let expect = if c == d {
                    Cyclotomic::from_int((g.order() / g.classes()[c].size()) as i64)
                } else {
                    Cyclotomic::zero()
                };
                if s != expect {
                    return Err(format!("column relation fails for classes {c}, {d}: {s}"));
                }
            }
        }
        let sq: u64 = self.degrees().iter().map(|d| d * d).sum();
        if sq as usize != g.order() {
            return Err(format!("sum of squared degrees {sq} != {}", g.order()));
        }
        Ok(())
    }

    /// Table identity: rows compared value by value.
    pub fn same_values(&self, other: &CharacterTable) -> bool {
        self.rows.len() == other.rows.len() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.values() == b.values())
    }
}

/// `G_θ = {g : θ^g = θ}` for a class function θ on a normal subgroup.
pub fn inertia_group(g: &Arc<Group>, theta: &Character) -> Result<Subgroup> {
    let n = theta.group();
    let nsub = g.embed(n).ok_or_else(|| crate::error::Error::Input("θ is not defined on a subgroup".into()))?;
    if !g.is_normal(&nsub) {
        return Err(crate::error::Error::NotNormal);
    }
    let reps: Vec<u32> =
        n.classes().iter().map(|cl| g.index_of(n.element(cl.representative)).expect("subgroup element")).collect();
    let stab = (0..g.order() as u32)
        .filter(|&x| {
            // θ^x(y) = θ(x y x⁻¹)
            reps.iter().enumerate().all(|(c, &y)| {
                let z = g.conj(y, g.inv(x));
                theta.at_perm(g.element(z)).expect("normal subgroup") == theta.value(c)
            })
        })
        .collect();
    Ok(g.subgroup_from_elements(stab))
}

impl Group {
    pub fn subgroup_from_elements(&self, mut elements: Vec<u32>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        Subgroup::from_sorted(elements, self.order())
    }
}
