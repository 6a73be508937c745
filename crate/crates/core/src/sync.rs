//! Synchronization testing and exact reset thresholds.
//!
//! The synchronizing test works on the digraph of unordered state pairs
//! (backward reachability from merged pairs), which is fast. The exact
//! threshold search runs a forward breadth-first search from the full state
//! set over subset images; the first singleton reached gives the minimum
//! reset-word length, and parent links reconstruct a witness.

use std::collections::HashSet;

use crate::automata::{Dfa, StateSet, Word};
use crate::error::{Error, Result};

/// Outcome of the exact reset-threshold search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResetResult {
    /// The automaton is synchronizing; `witness` has length exactly `threshold`
    /// and is the lexicographically least shortest reset word (letters compared
    /// by index).
    Reset { threshold: usize, witness: Word },
    NotSynchronizing,
    /// The threshold, if any, exceeds the requested depth cap.
    CapExceeded { cap: usize },
}

impl ResetResult {
    /// The threshold, if the automaton was shown synchronizing.
    pub fn threshold(&self) -> Option<usize> {
        match self {
            ResetResult::Reset { threshold, .. } => Some(*threshold),
            _ => None,
        }
    }
}

/// Whether some word sends every state to one common state.
pub fn is_synchronizing(dfa: &Dfa) -> bool {
    let n = dfa.n();
    let k = dfa.k();
    if n == 1 {
        return true;
    }
    // Triangular index of an unordered pair p < q.
    let pid = |p: usize, q: usize| p * (2 * n - p - 1) / 2 + (q - p - 1);
    let pair_count = n * (n - 1) / 2;
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); pair_count];
    let mut mergeable = vec![false; pair_count];
    let mut queue: Vec<u32> = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let x = pid(p, q);
            for a in 0..k {
                let (mut p2, mut q2) = (dfa.step(p, a), dfa.step(q, a));
                if p2 == q2 {
                    if !mergeable[x] {
                        mergeable[x] = true;
                        queue.push(x as u32);
                    }
                } else {
                    if p2 > q2 {
                        std::mem::swap(&mut p2, &mut q2);
                    }
                    rev[pid(p2, q2)].push(x as u32);
                }
            }
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let y = queue[head] as usize;
        head += 1;
        for &x in &rev[y] {
            if !mergeable[x as usize] {
                mergeable[x as usize] = true;
                queue.push(x);
            }
        }
    }
    mergeable.iter().all(|&b| b)
}

fn image_u64(delta: &[u8], k: usize, s: u64, a: usize) -> u64 {
    let mut img = 0u64;
    let mut rest = s;
    while rest != 0 {
        let q = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        img |= 1u64 << delta[q * k + a];
    }
    img
}

// Dense bit table of 2^n flags for small n, hash set above.
enum Visited {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

const DENSE_LIMIT: usize = 20;

impl Visited {
    fn new(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            Visited::Dense(vec![0u64; (1usize << n).div_ceil(64)])
        } else {
            Visited::Sparse(HashSet::new())
        }
    }

    /// Returns true if the subset was not seen before.
    fn insert(&mut self, s: u64) -> bool {
        match self {
            Visited::Dense(table) => {
                let (w, b) = ((s >> 6) as usize, 1u64 << (s & 63));
                let new = table[w] & b == 0;
                table[w] |= b;
                new
            }
            Visited::Sparse(set) => set.insert(s),
        }
    }
}

/// Exact minimum reset-word length with a witness of that exact length.
///
/// `cap`, when given, bounds the search depth: if the threshold would exceed
/// it, the search stops without committing to a value.
pub fn reset_threshold(dfa: &Dfa, cap: Option<usize>) -> ResetResult {
    let n = dfa.n();
    let k = dfa.k();
    if n == 1 {
        return ResetResult::Reset { threshold: 0, witness: Word::empty() };
    }
    let delta = dfa.delta();
    let full = StateSet::full(n).bits();
    let mut visited = Visited::new(n);
    visited.insert(full);
    let mut nodes: Vec<u64> = vec![full];
    // parents[i] = (index of the node this one was discovered from, letter used).
    let mut parents: Vec<(u32, u8)> = vec![(u32::MAX, 0)];
    let (mut level_start, mut level_end, mut depth) = (0usize, 1usize, 0usize);
    loop {
        if let Some(c) = cap {
            if depth + 1 > c {
                return ResetResult::CapExceeded { cap: c };
            }
        }
        for idx in level_start..level_end {
            let s = nodes[idx];
            for a in 0..k {
                let img = image_u64(delta, k, s, a);
                if visited.insert(img) {
                    if img & (img - 1) == 0 {
                        let mut letters = vec![a as u8];
                        let mut cur = idx;
                        while parents[cur].0 != u32::MAX {
                            letters.push(parents[cur].1);
                            cur = parents[cur].0 as usize;
                        }
                        letters.reverse();
                        return ResetResult::Reset {
                            threshold: depth + 1,
                            witness: Word::from_raw(letters),
                        };
                    }
                    nodes.push(img);
                    parents.push((idx as u32, a as u8));
                }
            }
        }
        if nodes.len() == level_end {
            return ResetResult::NotSynchronizing;
        }
        level_start = level_end;
        level_end = nodes.len();
        depth += 1;
    }
}

/// The set of states the automaton can be reset to, i.e. all `p` such that
/// some word maps the full state set onto `{p}`.
///
/// The restriction of the automaton to this set is a strongly connected
/// subautomaton (checked in debug builds).
pub fn reset_target_states(dfa: &Dfa) -> Result<StateSet> {
    let n = dfa.n();
    let k = dfa.k();
    let delta = dfa.delta();
    let full = StateSet::full(n).bits();
    let mut targets = 0u64;
    if full & (full - 1) == 0 {
        targets = full;
    }
    let mut visited = Visited::new(n);
    visited.insert(full);
    let mut queue: Vec<u64> = vec![full];
    let mut head = 0;
    while head < queue.len() {
        let s = queue[head];
        head += 1;
        for a in 0..k {
            let img = image_u64(delta, k, s, a);
            if visited.insert(img) {
                if img & (img - 1) == 0 {
                    targets |= img;
                }
                queue.push(img);
            }
        }
    }
    if targets == 0 {
        return Err(Error::NotSynchronizing);
    }
    let set = StateSet::from_bits(n, targets);
    #[cfg(debug_assertions)]
    {
        let sub = dfa
            .subautomaton(set)
            .expect("reset targets must induce a closed subautomaton");
        debug_assert!(crate::digraph::is_strongly_connected(
            &crate::digraph::underlying_digraph(&sub)
        ));
    }
    Ok(set)
}

/// Reusable subset-BFS workspace for bulk threshold computation (census runs).
/// Dense visited table, no witness tracking; supports up to 20 states.
pub(crate) struct SubsetBfs {
    visited: Vec<u64>,
    queue: Vec<u32>,
}

impl SubsetBfs {
    pub(crate) fn new() -> Self {
        SubsetBfs { visited: Vec::new(), queue: Vec::new() }
    }

    /// Exact reset threshold of the automaton given by a row-major `n * k`
    /// transition table, or `None` if it is not synchronizing.
    pub(crate) fn reset_len(&mut self, n: usize, k: usize, delta: &[u8]) -> Option<usize> {
        debug_assert!((1..=DENSE_LIMIT).contains(&n) && delta.len() == n * k);
        if n == 1 {
            return Some(0);
        }
        let words = (1usize << n).div_ceil(64);
        if self.visited.len() < words {
            self.visited.resize(words, 0);
        }
        for w in &mut self.visited[..words] {
            *w = 0;
        }
        let full: u32 = (1u32 << n) - 1;
        self.queue.clear();
        self.queue.push(full);
        self.visited[(full >> 6) as usize] |= 1u64 << (full & 63);
        let (mut level_start, mut level_end, mut depth) = (0usize, 1usize, 0usize);
        loop {
            for idx in level_start..level_end {
                let s = self.queue[idx];
                for a in 0..k {
                    let mut img = 0u32;
                    let mut rest = s;
                    while rest != 0 {
                        let q = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        img |= 1u32 << delta[q * k + a];
                    }
                    let (w, b) = ((img >> 6) as usize, 1u64 << (img & 63));
                    if self.visited[w] & b == 0 {
                        self.visited[w] |= b;
                        if img & (img - 1) == 0 {
                            return Some(depth + 1);
                        }
                        self.queue.push(img);
                    }
                }
            }
            if self.queue.len() == level_end {
                return None;
            }
            level_start = level_end;
            level_end = self.queue.len();
            depth += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build, claimed_word, SeriesName};
    use std::collections::{BTreeSet, HashMap, VecDeque};

    /// Independent slow oracle: breadth-first search over explicit sets of
    /// states, no bit tricks shared with the implementation under test.
    fn oracle_reset_threshold(dfa: &Dfa) -> Option<usize> {
        let full: BTreeSet<usize> = (0..dfa.n()).collect();
        let mut dist: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        dist.insert(full.clone(), 0);
        let mut queue = VecDeque::new();
        queue.push_back(full.clone());
        if full.len() == 1 {
            return Some(0);
        }
        while let Some(s) = queue.pop_front() {
            let d = dist[&s];
            for a in 0..dfa.k() {
                let img: BTreeSet<usize> = s.iter().map(|&q| dfa.step(q, a)).collect();
                if !dist.contains_key(&img) {
                    if img.len() == 1 {
                        return Some(d + 1);
                    }
                    dist.insert(img.clone(), d + 1);
                    queue.push_back(img);
                }
            }
        }
        None
    }

    /// First reset word in length-then-lexicographic order, by brute force.
    fn oracle_lex_min_reset_word(dfa: &Dfa, max_len: usize) -> Option<Vec<u8>> {
        let k = dfa.k() as u128;
        for len in 0..=max_len {
            for code in 0..k.pow(len as u32) {
                // Most significant digit first, so numeric order is lexicographic.
                let mut word = vec![0u8; len];
                let mut c = code;
                for i in (0..len).rev() {
                    word[i] = (c % k) as u8;
                    c /= k;
                }
                let img = dfa
                    .image(dfa.full_set(), &Word::from_raw(word.clone()))
                    .unwrap();
                if img.is_singleton() {
                    return Some(word);
                }
            }
        }
        None
    }

    #[test]
    fn known_series_thresholds() {
        let cases = [
            (SeriesName::C, 9, 64),
            (SeriesName::W, 9, 57),
            (SeriesName::DPrime, 9, 58),
            (SeriesName::DDouble, 9, 56),
        ];
        for (name, n, want) in cases {
            let dfa = build(name, n).unwrap();
            let res = reset_threshold(&dfa, None);
            match res {
                ResetResult::Reset { threshold, witness } => {
                    assert_eq!(threshold, want, "{name:?}_{n}");
                    assert_eq!(witness.len(), want);
                    let img = dfa.image(dfa.full_set(), &witness).unwrap();
                    assert!(img.is_singleton());
                }
                other => panic!("expected reset, got {other:?}"),
            }
        }
    }

    #[test]
    fn single_state_resets_with_empty_word() {
        let one = Dfa::from_table(1, 2, &[0, 0]).unwrap();
        assert!(is_synchronizing(&one));
        assert_eq!(
            reset_threshold(&one, None),
            ResetResult::Reset { threshold: 0, witness: Word::empty() }
        );
        assert_eq!(reset_target_states(&one).unwrap().iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn permutation_automata_never_synchronize() {
        // Both letters act as permutations, so images never shrink.
        let d = Dfa::from_fn(5, 2, |q, a| if a == 0 { (q + 1) % 5 } else { (q + 2) % 5 }).unwrap();
        assert!(!is_synchronizing(&d));
        assert_eq!(reset_threshold(&d, None), ResetResult::NotSynchronizing);
    }

    #[test]
    fn cap_bounds_search_depth() {
        let c9 = build(SeriesName::C, 9).unwrap();
        assert_eq!(reset_threshold(&c9, Some(10)), ResetResult::CapExceeded { cap: 10 });
        assert_eq!(reset_threshold(&c9, Some(63)), ResetResult::CapExceeded { cap: 63 });
        assert_eq!(reset_threshold(&c9, Some(64)).threshold(), Some(64));
        // A cap above the threshold changes nothing.
        assert_eq!(reset_threshold(&c9, Some(1000)).threshold(), Some(64));
    }

    #[test]
    fn synchronization_test_agrees_with_subset_search() {
        let fig2 = Dfa::parse("4 3\n1 2 0\n2 3 0\n3 0 2\n1 3 2").unwrap();
        assert_eq!(is_synchronizing(&fig2), oracle_reset_threshold(&fig2).is_some());
        assert!(is_synchronizing(&build(SeriesName::C, 9).unwrap()));
    }

    #[test]
    fn thresholds_match_oracle_on_small_series() {
        for n in 4..=7 {
            for name in [SeriesName::C, SeriesName::W, SeriesName::E, SeriesName::H] {
                let dfa = build(name, n).unwrap();
                assert_eq!(reset_threshold(&dfa, None).threshold(), oracle_reset_threshold(&dfa));
            }
        }
    }

    #[test]
    fn witness_is_lexicographically_least_shortest() {
        let c4 = build(SeriesName::C, 4).unwrap();
        let expect = oracle_lex_min_reset_word(&c4, 9).unwrap();
        match reset_threshold(&c4, None) {
            ResetResult::Reset { witness, .. } => assert_eq!(witness.letters(), &expect[..]),
            other => panic!("expected reset, got {other:?}"),
        }
        let fig2 = Dfa::parse("4 3\n1 2 0\n2 3 0\n3 0 2\n1 3 2").unwrap();
        if let Some(expect) = oracle_lex_min_reset_word(&fig2, 12) {
            match reset_threshold(&fig2, None) {
                ResetResult::Reset { threshold, witness } => {
                    assert_eq!(witness.letters(), &expect[..]);
                    assert_eq!(threshold, expect.len());
                }
                other => panic!("expected reset, got {other:?}"),
            }
        }
    }

    #[test]
    fn no_shorter_word_synchronizes() {
        // Exhaustive re-check of minimality on a tiny instance.
        let c4 = build(SeriesName::C, 4).unwrap();
        let t = reset_threshold(&c4, None).threshold().unwrap();
        assert_eq!(t, 9);
        assert_eq!(oracle_lex_min_reset_word(&c4, t - 1), None);
    }

    #[test]
    fn reset_targets_of_strongly_connected_automata_cover_all_states() {
        for n in 4..=8 {
            let c = build(SeriesName::C, n).unwrap();
            assert_eq!(reset_target_states(&c).unwrap().len(), n);
        }
        let w6 = build(SeriesName::W, 6).unwrap();
        assert_eq!(reset_target_states(&w6).unwrap().len(), 6);
    }

    #[test]
    fn reset_targets_reject_non_synchronizing_input() {
        let d = Dfa::from_fn(3, 1, |q, _| (q + 1) % 3).unwrap();
        assert_eq!(reset_target_states(&d), Err(Error::NotSynchronizing));
    }

    #[test]
    fn reset_targets_match_singleton_scan_oracle() {
        // Oracle: collect every singleton reachable from the full set.
        let dfa = build(SeriesName::E, 6).unwrap();
        let mut seen = BTreeSet::new();
        let mut frontier = vec![(0..6).collect::<BTreeSet<usize>>()];
        let mut visited: BTreeSet<BTreeSet<usize>> = frontier.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            if s.len() == 1 {
                seen.insert(*s.iter().next().unwrap());
            }
            for a in 0..2 {
                let img: BTreeSet<usize> = s.iter().map(|&q| dfa.step(q, a)).collect();
                if visited.insert(img.clone()) {
                    frontier.push(img);
                }
            }
        }
        let got: BTreeSet<usize> = reset_target_states(&dfa).unwrap().iter().collect();
        assert_eq!(got, seen);
    }

    #[test]
    fn fast_path_agrees_with_general_search() {
        let mut bfs = SubsetBfs::new();
        for n in 4..=9 {
            for name in [SeriesName::C, SeriesName::W, SeriesName::DPrime, SeriesName::DDouble] {
                let dfa = build(name, n).unwrap();
                assert_eq!(
                    bfs.reset_len(dfa.n(), dfa.k(), dfa.delta()),
                    reset_threshold(&dfa, None).threshold()
                );
            }
        }
        let d = Dfa::from_fn(5, 2, |q, a| if a == 0 { (q + 1) % 5 } else { (q + 2) % 5 }).unwrap();
        assert_eq!(bfs.reset_len(5, 2, d.delta()), None);
    }

    #[test]
    fn sparse_visited_path_handles_more_than_twenty_states() {
        let c22 = build(SeriesName::C, 22).unwrap();
        assert_eq!(reset_threshold(&c22, None).threshold(), Some(441));
    }

    #[test]
    fn claimed_words_are_witnesses() {
        for (name, n) in [(SeriesName::C, 4), (SeriesName::W, 4), (SeriesName::B, 5)] {
            let dfa = build(name, n).unwrap();
            let w = claimed_word(name, n).unwrap();
            assert!(dfa.image(dfa.full_set(), &w).unwrap().is_singleton());
        }
    }
}
