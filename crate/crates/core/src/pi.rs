//! Sets of primes and the π / π′ split of integers and group elements.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{mod_inv, prime_factors};

/// A set of primes, either listed explicitly or as the complement of a
/// finite set (`p′` is `ComplementOf({p})`). Membership of primes that do
/// not divide the group order never matters; use [`PiSet::effective`] to get
/// the primes relevant to a given group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiSet {
    Primes(BTreeSet<u64>),
    ComplementOf(BTreeSet<u64>),
}

impl PiSet {
    pub fn primes<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        PiSet::Primes(ps.into_iter().collect())
    }

    /// `p′`, all primes except `p`.
    pub fn complement_of(p: u64) -> Self {
        PiSet::ComplementOf([p].into_iter().collect())
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PiSet::Primes(s) => s.contains(&p),
            PiSet::ComplementOf(s) => !s.contains(&p),
        }
    }

    /// π′.
    pub fn complement(&self) -> Self {
        match self {
            PiSet::Primes(s) => PiSet::ComplementOf(s.clone()),
            PiSet::ComplementOf(s) => PiSet::Primes(s.clone()),
        }
    }

    pub fn is_pi_number(&self, n: u64) -> bool {
        prime_factors(n).into_iter().all(|p| self.contains(p))
    }

    /// Largest divisor of `n` that is a π-number.
    pub fn pi_part(&self, mut n: u64) -> u64 {
        let mut part = 1;
        for p in prime_factors(n) {
            while n % p == 0 {
                n /= p;
                if self.contains(p) {
                    part *= p;
                }
            }
        }
        part
    }

    /// The primes of π dividing `order`.
    pub fn effective(&self, order: u64) -> Vec<u64> {
        prime_factors(order).into_iter().filter(|&p| self.contains(p)).collect()
    }

    /// The explicit set of primes of π dividing `order`.
    pub fn restricted_to(&self, order: u64) -> PiSet {
        PiSet::Primes(self.effective(order).into_iter().collect())
    }

    /// Exponent `u` with `x^u` the π-part of any `x` of order `n`.
    pub fn pi_part_exponent(&self, n: u64) -> u64 {
        let a = self.pi_part(n);
        let b = n / a;
        if a == 1 {
            return 0;
        }
        if b == 1 {
            return 1;
        }
        // u ≡ 1 (mod a), u ≡ 0 (mod b)
        b * mod_inv(b % a, a).expect("coprime parts") % n
    }
}

impl fmt::Display for PiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            PiSet::Primes(s) => write!(f, "{{{}}}", list(s)),
            PiSet::ComplementOf(s) => write!(f, "{{{}}}'", list(s)),
        }
    }
}

/// Parses `2,3` (explicit) or `3'` (complement of 3).
impl FromStr for PiSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, complement) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let body = body.trim_start_matches('{').trim_end_matches('}');
        let mut primes = BTreeSet::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let p: u64 = tok.parse().map_err(|_| format!("not a prime: {tok:?}"))?;
            if !crate::arith::is_prime(p) {
                return Err(format!("not a prime: {p}"));
            }
            primes.insert(p);
        }
        Ok(if complement { PiSet::ComplementOf(primes) } else { PiSet::Primes(primes) })
    }
}
