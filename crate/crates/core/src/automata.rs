//! Complete deterministic finite automata, words over their alphabet, and
//! state sets the words act on.
//!
//! States are indexed `0..n`, letters `0..k`. The transition table is total:
//! every `(state, letter)` pair has exactly one target state.

use std::fmt;

use crate::error::{Error, Result};

/// Hard capacity for state counts; state sets are backed by a single `u64`.
pub const MAX_STATES: usize = 64;

/// Hard capacity for alphabet sizes.
pub const MAX_LETTERS: usize = 64;

/// A complete deterministic finite automaton given by its transition table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    n: usize,
    k: usize,
    /// Row-major table: `delta[q * k + a]` is the target of state `q` under letter `a`.
    delta: Vec<u8>,
}

impl Dfa {
    /// Builds an automaton from a row-major transition table of `n * k` entries.
    pub fn from_table(n: usize, k: usize, entries: &[usize]) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::TooLarge {
                what: "state count",
                limit: MAX_STATES,
                requested: n,
            });
        }
        if k == 0 || k > MAX_LETTERS {
            return Err(Error::TooLarge {
                what: "letter count",
                limit: MAX_LETTERS,
                requested: k,
            });
        }
        if entries.len() != n * k {
            return Err(Error::Parse(format!(
                "transition table must have {} entries, got {}",
                n * k,
                entries.len()
            )));
        }
        let mut delta = Vec::with_capacity(n * k);
        for &target in entries {
            if target >= n {
                return Err(Error::StateOutOfRange { state: target, n });
            }
            delta.push(target as u8);
        }
        Ok(Dfa { n, k, delta })
    }

    /// Builds an automaton from a function `(state, letter) -> target`.
    pub fn from_fn(n: usize, k: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * k);
        for q in 0..n {
            for a in 0..k {
                entries.push(f(q, a));
            }
        }
        Self::from_table(n, k, &entries)
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of letters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn delta(&self) -> &[u8] {
        &self.delta
    }

    /// Single transition step. Both arguments must be in range.
    #[inline]
    pub fn step(&self, q: usize, a: usize) -> usize {
        debug_assert!(q < self.n && a < self.k);
        self.delta[q * self.k + a] as usize
    }

    /// Applies a word to a state, left to right. The empty word is the identity.
    pub fn apply(&self, q: usize, w: &Word) -> Result<usize> {
        if q >= self.n {
            return Err(Error::StateOutOfRange { state: q, n: self.n });
        }
        let mut cur = q;
        for &a in w.letters() {
            let a = a as usize;
            if a >= self.k {
                return Err(Error::LetterOutOfRange { letter: a, k: self.k });
            }
            cur = self.step(cur, a);
        }
        Ok(cur)
    }

    /// Pointwise image of a state set under a word.
    pub fn image(&self, s: StateSet, w: &Word) -> Result<StateSet> {
        if s.capacity() != self.n {
            return Err(Error::StateOutOfRange {
                state: s.capacity(),
                n: self.n,
            });
        }
        let mut bits = s.bits;
        for &a in w.letters() {
            let a = a as usize;
            if a >= self.k {
                return Err(Error::LetterOutOfRange { letter: a, k: self.k });
            }
            let mut next = 0u64;
            let mut rest = bits;
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= 1u64 << self.step(q, a);
            }
            bits = next;
        }
        Ok(StateSet { bits, n: self.n })
    }

    /// Whether the letter acts as a bijection on the state set.
    pub fn is_permutation_letter(&self, a: usize) -> Result<bool> {
        if a >= self.k {
            return Err(Error::LetterOutOfRange { letter: a, k: self.k });
        }
        let mut seen = 0u64;
        for q in 0..self.n {
            seen |= 1u64 << self.step(q, a);
        }
        Ok(seen.count_ones() as usize == self.n)
    }

    /// The set of all states.
    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.n)
    }

    /// States reachable from `q` by any word, including `q` itself.
    pub fn reachable_from(&self, q: usize) -> Result<StateSet> {
        if q >= self.n {
            return Err(Error::StateOutOfRange { state: q, n: self.n });
        }
        let mut reach = 1u64 << q;
        let mut frontier = reach;
        while frontier != 0 {
            let mut grown = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let p = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for a in 0..self.k {
                    grown |= 1u64 << self.step(p, a);
                }
            }
            frontier = grown & !reach;
            reach |= grown;
        }
        Ok(StateSet { bits: reach, n: self.n })
    }

    /// Restriction to a closed, non-empty state set, with states renumbered in
    /// increasing order of their old indices.
    pub fn subautomaton(&self, s: StateSet) -> Result<Dfa> {
        if s.capacity() != self.n {
            return Err(Error::StateOutOfRange {
                state: s.capacity(),
                n: self.n,
            });
        }
        if s.is_empty() {
            return Err(Error::Parse("subautomaton needs a non-empty state set".into()));
        }
        let mut new_index = [usize::MAX; MAX_STATES];
        for (i, q) in s.iter().enumerate() {
            new_index[q] = i;
        }
        let mut entries = Vec::with_capacity(s.len() * self.k);
        for q in s.iter() {
            for a in 0..self.k {
                let t = self.step(q, a);
                if !s.contains(t) {
                    return Err(Error::NotClosed { state: q, letter: a });
                }
                entries.push(new_index[t]);
            }
        }
        Dfa::from_table(s.len(), self.k, &entries)
    }

    /// Parses the text format: first line `n k`, then `n` lines of `k` targets.
    pub fn parse(text: &str) -> Result<Self> {
        let mut numbers = Vec::new();
        for token in text.split_whitespace() {
            let value: usize = token
                .parse()
                .map_err(|_| Error::Parse(format!("invalid integer `{token}`")))?;
            numbers.push(value);
        }
        if numbers.len() < 2 {
            return Err(Error::Parse("missing `n k` header".into()));
        }
        let (n, k) = (numbers[0], numbers[1]);
        if n == 0 || k == 0 {
            return Err(Error::Parse("state and letter counts must be positive".into()));
        }
        let body = &numbers[2..];
        if body.len() != n.saturating_mul(k) {
            return Err(Error::Parse(format!(
                "expected {} transition entries, got {}",
                n.saturating_mul(k),
                body.len()
            )));
        }
        Self::from_table(n, k, body)
    }
}

impl fmt::Display for Dfa {
    /// Serializes back to the text format accepted by [`Dfa::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        for q in 0..self.n {
            for a in 0..self.k {
                if a > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.step(q, a))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dfa({} states, {} letters, {:?})", self.n, self.k, self.delta)
    }
}

/// A finite word: a sequence of letter indices, possibly empty.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// The empty word (identity action).
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word from letter indices.
    pub fn from_letters(letters: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &a in letters {
            if a >= MAX_LETTERS {
                return Err(Error::LetterOutOfRange { letter: a, k: MAX_LETTERS });
            }
            out.push(a as u8);
        }
        Ok(Word { letters: out })
    }

    /// Parses a word over `a..z`, mapping `a` to letter 0 and so on.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                'a'..='z' => letters.push(c as u8 - b'a'),
                _ => return Err(Error::Parse(format!("invalid letter `{c}` in word"))),
            }
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub(crate) fn from_raw(letters: Vec<u8>) -> Self {
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.letters {
            if a < 26 {
                write!(f, "{}", (b'a' + a) as char)?;
            } else {
                write!(f, "({a})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A subset of the states `0..n`, backed by a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: u64,
    n: usize,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_STATES).contains(&n));
        StateSet { bits: 0, n }
    }

    pub fn full(n: usize) -> Self {
        assert!((1..=MAX_STATES).contains(&n));
        let bits = if n == MAX_STATES { u64::MAX } else { (1u64 << n) - 1 };
        StateSet { bits, n }
    }

    pub fn from_states(n: usize, states: &[usize]) -> Result<Self> {
        let mut s = StateSet::empty(n);
        for &q in states {
            if q >= n {
                return Err(Error::StateOutOfRange { state: q, n });
            }
            s.bits |= 1u64 << q;
        }
        Ok(s)
    }

    /// Capacity, i.e. the `n` of the automaton the set belongs to.
    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn contains(&self, q: usize) -> bool {
        q < self.n && self.bits & (1u64 << q) != 0
    }

    pub fn insert(&mut self, q: usize) {
        assert!(q < self.n);
        self.bits |= 1u64 << q;
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_singleton(&self) -> bool {
        self.bits != 0 && self.bits & (self.bits - 1) == 0
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        assert_eq!(self.n, other.n);
        StateSet { bits: self.bits | other.bits, n: self.n }
    }

    pub fn is_subset_of(&self, other: &StateSet) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(q)
            }
        })
    }

    pub(crate) fn bits(&self) -> u64 {
        self.bits
    }

    pub(crate) fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_STATES).contains(&n));
        debug_assert!(n == MAX_STATES || bits < (1u64 << n));
        StateSet { bits, n }
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}
