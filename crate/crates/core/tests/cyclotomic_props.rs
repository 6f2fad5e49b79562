use num_bigint::BigInt;
use proptest::prelude::*;
use vertexlab::{Cyclotomic, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn in_field(n: u32) -> impl Strategy<Value = Cyclotomic> {
    let term = (0..n as i64, -6i64..=6, 1i64..=4);
    proptest::collection::vec(term, 0..6)
        .prop_map(move |terms| Cyclotomic::from_exponent_sums(n, terms.into_iter().map(|(e, a, b)| (e, rat(a, b)))))
}

/// A random element of Q(ζ_n) for some n ≤ 24, with the n it was built in.
fn element() -> impl Strategy<Value = (u32, Cyclotomic)> {
    (1u32..=24).prop_flat_map(|n| in_field(n).prop_map(move |c| (n, c)))
}

fn value() -> impl Strategy<Value = Cyclotomic> {
    element().prop_map(|(_, c)| c)
}

/// Three elements of one field Q(ζ_n), n ≤ 24.
fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    (1u32..=24).prop_flat_map(|n| (in_field(n), in_field(n), in_field(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_is_an_abelian_group((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &Cyclotomic::zero(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive((a, b, c) in triple()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Cyclotomic::one(), a.clone());
    }

    #[test]
    fn mixed_fields_embed_in_the_compositum(a in in_field(8), b in in_field(12), c in in_field(5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(120 % (&(&a * &b) * &c).conductor(), 0);
    }

    #[test]
    fn nonzero_elements_are_invertible(a in value()) {
        match a.inverse() {
            None => prop_assert!(a.is_zero()),
            Some(inv) => prop_assert!((&a * &inv).is_one()),
        }
    }

    #[test]
    fn normal_form_is_canonical((n, a) in element(), k in 1u32..=4) {
        prop_assert_eq!(n % a.conductor(), 0);
        prop_assert_ne!(a.conductor() % 4, 2);
        // rebuilding from coordinates in a larger field gives the same value
        let m = n * k;
        let coords = a.coordinates_in(m).unwrap();
        let rebuilt = Cyclotomic::from_exponent_sums(m, coords.into_iter().enumerate().map(|(e, q)| (e as i64, q)));
        prop_assert_eq!(rebuilt.conductor(), a.conductor());
        prop_assert_eq!(rebuilt, a);
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in value(), b in value()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        // a·ā is fixed by conjugation
        let n = &a * &a.conjugate();
        prop_assert_eq!(n.conjugate(), n);
    }

    #[test]
    fn galois_maps_are_automorphisms(a in value(), b in value(), k in 1i64..24) {
        prop_assume!(gcd(k as u32, a.conductor()) == 1 && gcd(k as u32, b.conductor()) == 1);
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
    }

    #[test]
    fn roots_of_unity(n in 1u32..=24, k in -30i64..30) {
        let z = Cyclotomic::root_of_unity(n, k);
        let expected = n / gcd(n, k.rem_euclid(n as i64) as u32);
        prop_assert_eq!(z.root_of_unity_order(), Some(expected));
        prop_assert_ne!(z.conductor() % 4, 2);
        prop_assert!(z.pow(n).is_one());
        prop_assert_eq!(&z * &z.conjugate(), Cyclotomic::one());
    }
}

#[test]
fn roots_of_unity_sum_to_zero() {
    for n in 2..=24 {
        let total: Cyclotomic = (0..n as i64).map(|k| Cyclotomic::root_of_unity(n, k)).sum();
        assert!(total.is_zero(), "n = {n}");
    }
}
