//! Small integer number theory used throughout: factorisation, totients,
//! modular powers and primitive roots. All inputs are machine-sized.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Smallest primitive root modulo the prime `q`.
pub fn primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (q - 1) / f, q) != 1))
        .expect("prime modulus has a primitive root")
}

/// True if every prime divisor of `n` satisfies `in_set`.
pub fn all_prime_divisors(n: u64, in_set: impl Fn(u64) -> bool) -> bool {
    prime_factors(n).into_iter().all(in_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation_and_totient() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(primitive_root(73), 5);
        assert_eq!(mod_pow(5, 72, 73), 1);
        assert!(is_prime(73) && !is_prime(91));
    }
}
