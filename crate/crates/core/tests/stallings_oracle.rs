//! Folded subgroup graphs against Nielsen reduction.

use std::collections::BTreeSet;

use magnus::oracle::{is_nielsen_reduced, nielsen_member, nielsen_rank, nielsen_reduce};
use magnus::stallings::{is_cyclic_collection, SubgroupGraph};
use magnus::words::{Generator, Word};
use proptest::prelude::*;

fn ambient() -> BTreeSet<Generator> {
    ["a", "b"].into_iter().map(Generator::new).collect()
}

fn arb_word(max: usize) -> impl Strategy<Value = Word> {
    let letters: Vec<_> = ambient()
        .iter()
        .flat_map(|g| [g.letter(), g.inv_letter()])
        .collect();
    proptest::collection::vec(proptest::sample::select(letters), 0..max).prop_map(Word::new)
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn known_ranks() {
    let cases = [
        (vec![w("a^2"), w("a^3")], 1),
        (vec![w("a b a^-1"), w("b")], 2),
        (vec![w("a b"), w("b a"), w("a b^-1")], 3),
        (vec![w("a^2"), w("b^2"), w("a b")], 3),
    ];
    for (gens, rank) in cases {
        let h = SubgroupGraph::build(&gens, &ambient());
        assert_eq!(h.rank(), rank, "{gens:?}");
        assert_eq!(nielsen_rank(&gens), rank, "{gens:?}");
    }
}

#[test]
fn cyclic_roots() {
    assert_eq!(
        is_cyclic_collection(&[w("a b a^-1"), w("a b^2 a^-1")]),
        Some(w("a b a^-1"))
    );
    assert_eq!(is_cyclic_collection(&[w("a"), w("b")]), None);
    assert_eq!(is_cyclic_collection(&[]), Some(Word::empty()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rank_agrees_with_nielsen(gens in proptest::collection::vec(arb_word(7), 0..4)) {
        let h = SubgroupGraph::build(&gens, &ambient());
        let basis = nielsen_reduce(&gens);
        prop_assert!(is_nielsen_reduced(&basis) || basis.is_empty());
        prop_assert_eq!(h.rank(), basis.len());
        prop_assert_eq!(h.basis().len(), basis.len());
    }

    #[test]
    fn membership_agrees_with_nielsen(
        gens in proptest::collection::vec(arb_word(6), 1..4),
        probes in proptest::collection::vec(arb_word(9), 1..6),
    ) {
        let h = SubgroupGraph::build(&gens, &ambient());
        for u in &probes {
            prop_assert_eq!(h.member_free(u), nielsen_member(&gens, u), "probe {}", u);
        }
        for u in &gens {
            prop_assert!(nielsen_member(&gens, u));
        }
    }

    #[test]
    fn cyclic_iff_rank_at_most_one(gens in proptest::collection::vec(arb_word(6), 0..4)) {
        let root = is_cyclic_collection(&gens);
        prop_assert_eq!(root.is_some(), nielsen_rank(&gens) <= 1);
        if let Some(rho) = root {
            let h = SubgroupGraph::build(&[rho], &ambient());
            let full = SubgroupGraph::build(&gens, &ambient());
            prop_assert!(h.same_subgroup(&full));
        }
    }
}
