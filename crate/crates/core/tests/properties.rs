//! Randomized invariants over the core operations.

use proptest::prelude::*;
use synchrolab_core::*;

#[derive(Clone, Debug)]
struct ArbDfa {
    dfa: Dfa,
    words: Vec<Word>,
}

fn arb_dfa(max_n: usize, max_k: usize) -> impl Strategy<Value = ArbDfa> {
    (1..=max_n, 1..=max_k)
        .prop_flat_map(|(n, k)| {
            let table = proptest::collection::vec(0..n, n * k);
            let words = proptest::collection::vec(
                proptest::collection::vec(0..k, 0..12),
                2,
            );
            (Just((n, k)), table, words)
        })
        .prop_map(|((n, k), table, words)| ArbDfa {
            dfa: Dfa::from_table(n, k, &table).unwrap(),
            words: words
                .into_iter()
                .map(|w| Word::from_letters(&w).unwrap())
                .collect(),
        })
}

fn arb_state_set(n: usize) -> impl Strategy<Value = StateSet> {
    proptest::collection::vec(0..n, 0..=n)
        .prop_map(move |states| StateSet::from_states(n, &states).unwrap())
}

fn concat(u: &Word, v: &Word) -> Word {
    let mut letters: Vec<usize> = u.letters().iter().map(|&a| a as usize).collect();
    letters.extend(v.letters().iter().map(|&a| a as usize));
    Word::from_letters(&letters).unwrap()
}

proptest! {
    /// apply(q, uv) = apply(apply(q, u), v).
    #[test]
    fn action_composes(arb in arb_dfa(8, 3), q in 0usize..8) {
        let dfa = &arb.dfa;
        let q = q % dfa.n();
        let (u, v) = (&arb.words[0], &arb.words[1]);
        let via = dfa.apply(dfa.apply(q, u).unwrap(), v).unwrap();
        prop_assert_eq!(dfa.apply(q, &concat(u, v)).unwrap(), via);
    }

    /// Images never grow, and they distribute over union.
    #[test]
    fn image_shrinks_and_distributes(arb in arb_dfa(8, 3), sets in (1usize..=8).prop_flat_map(|n| (arb_state_set(n), arb_state_set(n)))) {
        let dfa = &arb.dfa;
        let (s, t) = sets;
        // Align capacities: regenerate the sets against this dfa's n.
        let clip = |set: StateSet| {
            let states: Vec<usize> = set.iter().filter(|&q| q < dfa.n()).collect();
            StateSet::from_states(dfa.n(), &states).unwrap()
        };
        let (s, t) = (clip(s), clip(t));
        let w = &arb.words[0];
        let img_s = dfa.image(s, w).unwrap();
        prop_assert!(img_s.len() <= s.len());
        let img_t = dfa.image(t, w).unwrap();
        let img_union = dfa.image(s.union(&t), w).unwrap();
        prop_assert_eq!(img_union, img_s.union(&img_t));
    }

    /// If every letter permutes the states, images keep their size.
    #[test]
    fn permutation_automata_preserve_cardinality(
        n in 2usize..=8,
        shifts in proptest::collection::vec(1usize..8, 1..=3),
        word in proptest::collection::vec(0usize..3, 0..10),
    ) {
        let k = shifts.len();
        let dfa = Dfa::from_fn(n, k, |q, a| (q + shifts[a]) % n).unwrap();
        let word: Vec<usize> = word.into_iter().map(|a| a % k).collect();
        let w = Word::from_letters(&word).unwrap();
        let s = StateSet::from_states(n, &[0, n - 1]).unwrap();
        prop_assert_eq!(dfa.image(s, &w).unwrap().len(), s.len());
        if n > 1 {
            prop_assert!(!is_synchronizing(&dfa));
        }
    }

    /// The text format round-trips.
    #[test]
    fn dfa_serialization_round_trips(arb in arb_dfa(10, 4)) {
        let text = arb.dfa.to_string();
        prop_assert_eq!(Dfa::parse(&text).unwrap(), arb.dfa);
    }

    /// Walks of length s + t decompose through an intermediate vertex.
    #[test]
    fn digraph_powers_compose(
        n in 1usize..=6,
        edges in proptest::collection::vec((0usize..6, 0usize..6), 0..20),
        s in 0usize..5,
        t in 0usize..5,
    ) {
        let edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let d = Digraph::from_edges(n, &edges).unwrap();
        let ps = power(&d, s);
        let pt = power(&d, t);
        let pst = power(&d, s + t);
        for u in 0..n {
            for v in 0..n {
                let composed = (0..n).any(|w| ps.has_edge(u, w) && pt.has_edge(w, v));
                prop_assert_eq!(pst.has_edge(u, v), composed, "({}, {})", u, v);
            }
        }
    }

    /// Derived letters act exactly as their defining words.
    #[test]
    fn derive_is_action_faithful(arb in arb_dfa(8, 3)) {
        let dfa = &arb.dfa;
        let actions: Vec<Word> = arb
            .words
            .iter()
            .filter(|w| !w.is_empty())
            .cloned()
            .collect();
        prop_assume!(!actions.is_empty());
        let derived = derive(dfa, &actions).unwrap();
        for q in 0..dfa.n() {
            for (i, w) in actions.iter().enumerate() {
                prop_assert_eq!(derived.step(q, i), dfa.apply(q, w).unwrap());
            }
        }
    }

    /// A reported reset threshold always comes with a witness of exactly that
    /// length that synchronizes, and reported witnesses are minimal.
    #[test]
    fn reset_witnesses_are_valid(arb in arb_dfa(6, 2)) {
        let dfa = &arb.dfa;
        match reset_threshold(dfa, None) {
            ResetResult::Reset { threshold, witness } => {
                prop_assert_eq!(witness.len(), threshold);
                prop_assert!(dfa.image(dfa.full_set(), &witness).unwrap().is_singleton());
                prop_assert!(is_synchronizing(dfa));
            }
            ResetResult::NotSynchronizing => prop_assert!(!is_synchronizing(dfa)),
            ResetResult::CapExceeded { .. } => prop_assert!(false, "no cap was given"),
        }
    }

    /// The pair-based synchronization test agrees with the subset search.
    #[test]
    fn synchronization_tests_agree(arb in arb_dfa(7, 3)) {
        let dfa = &arb.dfa;
        let by_pairs = is_synchronizing(dfa);
        let by_subsets = matches!(reset_threshold(dfa, None), ResetResult::Reset { .. });
        prop_assert_eq!(by_pairs, by_subsets);
    }

    /// Valid strings parse into automata that renumber back to themselves.
    #[test]
    fn canonical_strings_are_renumbering_fixed_points(
        n in 1usize..=5,
        k in 1usize..=3,
        seed in 0u64..1_000_000,
    ) {
        let target = seed % 20_000;
        let mut e = enumerate_canonical(n, k, Shard::WHOLE).unwrap();
        let mut s = e.next().unwrap();
        for _ in 0..target {
            match e.next() {
                Some(next) => s = next,
                None => break,
            }
        }
        prop_assert!(validate_canonical(&s));
        let dfa = dfa_from_canonical(&s);
        let order: Vec<usize> = (0..k).collect();
        prop_assert_eq!(canonical_from_dfa(&dfa, 0, &order).unwrap(), s);
    }
}
