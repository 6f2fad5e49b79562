//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(ζ_n)` is stored as the residue of a polynomial in `ζ_n`
//! modulo the `n`-th cyclotomic polynomial, i.e. as a coefficient vector in
//! the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}`. Every value is kept with the
//! smallest conductor whose field contains it, so equality and hashing are
//! structural.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{euler_phi, gcd, lcm, mod_inv, prime_factors};

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Reduction data for `Q(ζ_n)`: the power-basis image of every `ζ_n^e`.
struct Field {
    phi: usize,
    /// `powers[e]` lists the nonzero `(basis index, coefficient)` of `ζ_n^e`.
    powers: Vec<Vec<(usize, i64)>>,
}

impl Field {
    fn build(n: u32) -> Field {
        let phi = euler_phi(n as u64) as usize;
        let poly = cyclotomic_polynomial(n);
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect());
            // multiply by x and fold the overflow back using the monic relation
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= top * poly[i];
                }
            }
        }
        Field { phi, powers }
    }
}

/// Integer coefficients of `Φ_n`, lowest degree first, monic.
fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

fn field(n: u32) -> Arc<Field> {
    static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = FIELDS.get_or_init(Default::default);
    if let Some(f) = cache.read().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let built = Arc::new(Field::build(n));
    cache.write().expect("field cache poisoned").entry(n).or_insert(built).clone()
}

/// Exact element of a cyclotomic field in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic { n: 1, coeffs: vec![q] }
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let f = field(n);
        let mut coeffs = vec![Rational::zero(); f.phi];
        for &(i, c) in &f.powers[e] {
            coeffs[i] = Rational::from_integer(BigInt::from(c));
        }
        Self::normalized(n, coeffs)
    }

    /// Builds `Σ q_e ζ_n^e` from arbitrary exponents `e` (taken mod `n`).
    pub fn from_exponent_sums<I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut sums = vec![Rational::zero(); n as usize];
        for (e, q) in terms {
            sums[e.rem_euclid(n as i64) as usize] += q;
        }
        Self::normalized(n, reduce_sums(n, &sums))
    }

    /// Conductor of the smallest cyclotomic field containing the value.
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients in `Q(ζ_conductor)`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Integer value, if the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.to_integer().and_then(|v| v.to_i64())
    }

    /// Complex conjugate, the image under `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Image under the automorphism `ζ_n ↦ ζ_n^k`; `k` must be a unit mod the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.n;
        if n == 1 {
            return self.clone();
        }
        let k = k.rem_euclid(n as i64) as u64;
        assert_eq!(gcd(k, n as u64), 1, "Galois exponent must be a unit");
        let mut sums = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                sums[(j as u64 * k % n as u64) as usize] += c;
            }
        }
        Self::normalized(n, reduce_sums(n, &sums))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Field norm down to `Q`: the product of all Galois conjugates.
    pub fn norm(&self) -> Rational {
        self.galois_product(true).to_rational().expect("norm of a cyclotomic is rational")
    }

    fn galois_product(&self, include_self: bool) -> Self {
        let n = self.n as u64;
        let mut acc = Self::one();
        for k in 1..n.max(2) {
            if gcd(k, n) == 1 && (include_self || k != 1) {
                acc = &acc * &self.galois(k as i64);
            }
        }
        if n == 1 && include_self {
            acc = self.clone();
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        let others = self.galois_product(false);
        let norm = (&others * self).to_rational().expect("norm is rational");
        Some(others.scale(&norm.recip()))
    }

    /// Multiplicative order if the value is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        let n = self.n;
        let candidate = if n % 2 == 1 { 2 * n } else { n };
        if !self.pow(candidate).is_one() {
            return None;
        }
        let mut best = candidate;
        for p in prime_factors(candidate as u64) {
            let p = p as u32;
            while best % p == 0 && self.pow(best / p).is_one() {
                best /= p;
            }
        }
        Some(best)
    }

    fn embed_sums(&self, target: u32) -> Vec<Rational> {
        let step = (target / self.n) as usize;
        let mut sums = vec![Rational::zero(); target as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                sums[j * step] += c;
            }
        }
        sums
    }

    /// Power-basis coordinates in `Q(ζ_m)`, if the value lies in that field.
    pub fn coordinates_in(&self, m: u32) -> Option<Vec<Rational>> {
        if m % self.n != 0 {
            return None;
        }
        let step = (m / self.n) as usize;
        let mut sums = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            sums[i * step] = c.clone();
        }
        Some(reduce_sums(m, &sums))
    }

    fn normalized(n: u32, coeffs: Vec<Rational>) -> Self {
        let (n, coeffs) = minimize(n, coeffs);
        Cyclotomic { n, coeffs }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        if self.n == other.n {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| if sign { a + b } else { a - b }).collect();
            return Self::normalized(self.n, coeffs);
        }
        let l = lcm(self.n as u64, other.n as u64) as u32;
        let mut sums = self.embed_sums(l);
        for (s, o) in sums.iter_mut().zip(other.embed_sums(l)) {
            if sign {
                *s += o;
            } else {
                *s -= o;
            }
        }
        Self::normalized(l, reduce_sums(l, &sums))
    }

    fn multiply(&self, other: &Self) -> Self {
        if self.n == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.n == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let l = lcm(self.n as u64, other.n as u64) as u32;
        let (sa, sb) = ((l / self.n) as usize, (l / other.n) as usize);
        let mut sums = vec![Rational::zero(); l as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    sums[(i * sa + j * sb) % l as usize] += a * b;
                }
            }
        }
        Self::normalized(l, reduce_sums(l, &sums))
    }
}

/// Reduces an exponent-indexed vector of length `n` to the power basis.
fn reduce_sums(n: u32, sums: &[Rational]) -> Vec<Rational> {
    let f = field(n);
    let mut out = vec![Rational::zero(); f.phi];
    for (e, s) in sums.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        for &(i, c) in &f.powers[e] {
            out[i] += s * Rational::from_integer(BigInt::from(c));
        }
    }
    out
}

fn minimize(mut n: u32, mut coeffs: Vec<Rational>) -> (u32, Vec<Rational>) {
    if coeffs.iter().all(Zero::is_zero) {
        return (1, vec![Rational::zero()]);
    }
    'outer: while n > 1 {
        for p in prime_factors(n as u64) {
            if let Some(c) = descend(n, &coeffs, p as u32) {
                n /= p as u32;
                coeffs = c;
                continue 'outer;
            }
        }
        break;
    }
    (n, coeffs)
}

/// Rewrites an element of `Q(ζ_n)` in `Q(ζ_{n/p})` if it lies there.
fn descend(n: u32, coeffs: &[Rational], p: u32) -> Option<Vec<Rational>> {
    let m = n / p;
    if m % p == 0 {
        // Φ_n(x) = Φ_m(x^p): the element lies in Q(ζ_m) iff only exponents divisible by p occur
        if coeffs.iter().enumerate().any(|(j, c)| j as u32 % p != 0 && !c.is_zero()) {
            return None;
        }
        return Some(coeffs.iter().step_by(p as usize).cloned().collect());
    }
    // n = p·m with gcd(p, m) = 1: ζ_n^j = ζ_m^s ζ_p^t with s = j/p mod m, t = j/m mod p
    let inv_p = if m == 1 { 0 } else { mod_inv(p as u64 % m as u64, m as u64)? };
    let inv_m = mod_inv(m as u64 % p as u64, p as u64)?;
    let mut parts = vec![vec![Rational::zero(); m as usize]; p as usize];
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = if m == 1 { 0 } else { (j as u64 * inv_p % m as u64) as usize };
        let t = (j as u64 * inv_m % p as u64) as usize;
        parts[t][s] += c;
    }
    let reduced: Vec<Vec<Rational>> = parts.iter().map(|b| reduce_sums(m, b)).collect();
    // over Q(ζ_m) the basis of Q(ζ_n) is 1, ζ_p, …, ζ_p^{p-2} with ζ_p^{p-1} = -Σ ζ_p^t
    let last = &reduced[p as usize - 1];
    if reduced[1..p as usize - 1].iter().any(|b| b != last) {
        return None;
    }
    Some(reduced[0].iter().zip(last).map(|(a, b)| a - b).collect())
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but fixed total order (conductor, then coefficients); used for
/// reproducible sorting, not compatible with the field structure.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, true)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, false)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.multiply(rhs)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |acc, x| &acc + &x)
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_int(v)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

/// GAP-style rendering, e.g. `-1 - 2*E(3)`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let root = match j {
                0 => String::new(),
                1 => format!("E({})", self.n),
                _ => format!("E({})^{}", self.n, j),
            };
            if root.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{mag}*{root}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    n: u32,
    coeffs: Vec<(u32, String)>,
}

pub(crate) fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<BigInt>().ok()?, b.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!den.is_zero()).then(|| Rational::new(num, den))
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u32, format_rational(c)))
            .collect();
        CyclotomicRepr { n: self.n, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(deserializer)?;
        if repr.n == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(repr.coeffs.len());
        for (e, s) in repr.coeffs {
            let q = parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))?;
            terms.push((e as i64, q));
        }
        Ok(Cyclotomic::from_exponent_sums(repr.n, terms))
    }
}
