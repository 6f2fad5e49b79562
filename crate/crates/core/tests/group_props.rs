use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use vertexlab::library;
use vertexlab::pistructure::is_invariant_under;
use vertexlab::{is_stable, linear_characters, Caps, CharacterTable, Group, Permutation};

fn permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

/// Groups generated by one to three random permutations of degree at most 5.
fn random_group() -> impl Strategy<Value = Arc<Group>> {
    (1usize..=5).prop_flat_map(|d| {
        proptest::collection::vec(permutation(d), 1..=3)
            .prop_map(move |gens| Group::from_generators("random", d, gens, Caps::default()).unwrap())
    })
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elements_form_a_group(g in random_group()) {
        prop_assert_eq!(factorial(g.degree()) % g.order(), 0);
        prop_assert!(g.element(0).is_identity());
        let elems = g.elements();
        prop_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        let last = g.order() as u32 - 1;
        for a in 0..g.order() as u32 {
            prop_assert_eq!(g.mul(a, g.inv(a)), 0);
            prop_assert_eq!(g.element(g.mul(a, last)), &g.element(a).then(g.element(last)));
        }
    }

    #[test]
    fn classes_partition_the_group(g in random_group()) {
        let mut seen = BTreeSet::new();
        for (i, c) in g.classes().iter().enumerate() {
            prop_assert_eq!(g.order() % c.size(), 0);
            for &x in &c.members {
                prop_assert!(seen.insert(x));
                prop_assert_eq!(g.class_of(x), i);
                prop_assert_eq!(g.element_order(x), c.order);
            }
            // closed under conjugation
            for y in 0..g.order() as u32 {
                prop_assert!(c.members.binary_search(&g.conj(c.representative, y)).is_ok());
            }
        }
        prop_assert_eq!(seen.len(), g.order());
    }

    #[test]
    fn character_degrees_square_sum_to_the_order(g in random_group()) {
        let table = CharacterTable::of(&g);
        prop_assert_eq!(table.rows.len(), g.class_count());
        prop_assert_eq!(table.degrees().iter().map(|d| d * d).sum::<u64>(), g.order() as u64);
        prop_assert_eq!(g.order() as u64 % table.degrees().iter().max().unwrap(), 0);
        prop_assert!(table.check_orthogonality().is_ok());
    }

    #[test]
    fn generated_subgroups_are_closed(g in random_group(), picks in proptest::collection::vec(any::<u32>(), 1..3)) {
        let gens: Vec<u32> = picks.iter().map(|p| p % g.order() as u32).collect();
        let h = g.generate(&gens);
        prop_assert_eq!(g.order() % h.order(), 0);
        for &a in h.elements() {
            for &b in h.elements() {
                prop_assert!(h.contains(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn stable_characters_are_normaliser_invariant(which in 0usize..14, sub in any::<usize>(), lin in any::<usize>()) {
        let g = library::default_corpus()[which].clone();
        let lat = g.lattice().unwrap();
        let reps: Vec<_> = lat.class_representatives().cloned().collect();
        let q = &reps[sub % reps.len()];
        let qg = g.subgroup_group(q);
        let lins = linear_characters(&qg);
        let delta = &lins[lin % lins.len()];
        if is_stable(delta, &g) {
            prop_assert!(is_invariant_under(delta, &g, &g.normalizer(q)));
        }
        // invariance under all of G forces stability for normal Q
        if g.is_normal(q) && is_invariant_under(delta, &g, &g.whole()) {
            prop_assert!(is_stable(delta, &g));
        }
    }
}
