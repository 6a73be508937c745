//! Canonical strings of initially-connected automata, exhaustive sharded
//! enumeration, isomorphism canonicalization, and the reset-threshold census.
//!
//! An initially-connected automaton, traversed breadth-first from its start
//! state with a fixed letter order, gets its states numbered by first
//! appearance. Concatenating the renumbered transition rows yields a string of
//! `n * k` integers that determines the automaton uniquely. A string of
//! numbers in `0..n` arises this way if and only if
//!
//! - (R1) every value `v > 1` is preceded by an occurrence of `v - 1`, and
//! - (R2) every state `1 <= m < n` occurs before position `m * k`.
//!
//! Enumerating exactly these strings visits every initially-connected
//! automaton a small number of times (at most `n * k!`), which is what makes
//! a full census feasible.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::automata::Dfa;
use crate::digraph::permutations;
use crate::error::{Error, Result};
use crate::histogram::{CensusHistogram, CensusMeta};
use crate::sync::SubsetBfs;

/// Largest state count the enumerator accepts.
pub const MAX_ENUM_STATES: usize = 20;

/// Largest letter count the enumerator accepts.
pub const MAX_ENUM_LETTERS: usize = 8;

/// The canonical string of an initially-connected automaton: `n * k` state
/// numbers, row per state, entry per letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalString {
    n: usize,
    k: usize,
    symbols: Vec<u8>,
}

impl CanonicalString {
    pub fn new(n: usize, k: usize, symbols: &[usize]) -> Result<Self> {
        if n == 0 || n > 255 {
            return Err(Error::TooLarge { what: "canonical string state count", limit: 255, requested: n });
        }
        if symbols.len() != n * k {
            return Err(Error::Parse(format!(
                "canonical string must have {} symbols, got {}",
                n * k,
                symbols.len()
            )));
        }
        let mut out = Vec::with_capacity(symbols.len());
        for &s in symbols {
            if s >= n {
                return Err(Error::StateOutOfRange { state: s, n });
            }
            out.push(s as u8);
        }
        Ok(CanonicalString { n, k, symbols: out })
    }

    pub(crate) fn from_raw(n: usize, k: usize, symbols: Vec<u8>) -> Self {
        debug_assert_eq!(symbols.len(), n * k);
        CanonicalString { n, k, symbols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Parses the bracketed comma-separated form, e.g. `[1,2,0,2]` with k = 2.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("canonical string must be bracketed".into()))?;
        let mut symbols = Vec::new();
        for tok in inner.split(',') {
            let v: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid symbol `{}`", tok.trim())))?;
            symbols.push(v);
        }
        if k == 0 || symbols.len() % k != 0 {
            return Err(Error::Parse(format!(
                "symbol count {} is not a multiple of the letter count {k}",
                symbols.len()
            )));
        }
        CanonicalString::new(symbols.len() / k, k, &symbols)
    }
}

impl fmt::Display for CanonicalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CanonicalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalString(n={}, k={}, {self})", self.n, self.k)
    }
}

/// Checks conditions (R1) and (R2) directly.
pub fn validate_canonical(s: &CanonicalString) -> bool {
    let (n, k) = (s.n, s.k);
    let mut seen = [false; 256];
    let mut first_pos = [usize::MAX; 256];
    for (i, &v) in s.symbols.iter().enumerate() {
        let v = v as usize;
        if v > 1 && !seen[v - 1] {
            return false;
        }
        if !seen[v] {
            seen[v] = true;
            first_pos[v] = i;
        }
    }
    (1..n).all(|m| first_pos[m] < m * k)
}

/// Reads the string as a transition table: symbol block `q` is the row of
/// state `q`.
pub fn dfa_from_canonical(s: &CanonicalString) -> Dfa {
    let entries: Vec<usize> = s.symbols.iter().map(|&v| v as usize).collect();
    Dfa::from_table(s.n, s.k, &entries).expect("canonical string entries are in range")
}

/// Scratch buffers for breadth-first renumbering over raw transition tables.
struct Renumbering {
    number: Vec<u8>,
    discovery: Vec<u8>,
}

impl Renumbering {
    fn new(n: usize) -> Self {
        Renumbering { number: vec![0; n], discovery: vec![0; n] }
    }

    /// Fills `out` with the canonical string of `(delta, start, order)`;
    /// false if some state is unreachable from `start`.
    fn renumber(
        &mut self,
        n: usize,
        k: usize,
        delta: &[u8],
        start: usize,
        order: &[u8],
        out: &mut [u8],
    ) -> bool {
        let (number, discovery) = (&mut self.number, &mut self.discovery);
        number[..n].fill(u8::MAX);
        number[start] = 0;
        discovery[0] = start as u8;
        let mut count = 1usize;
        let mut idx = 0usize;
        while idx < count {
            let q = discovery[idx] as usize;
            for &a in order {
                let t = delta[q * k + a as usize] as usize;
                if number[t] == u8::MAX {
                    number[t] = count as u8;
                    discovery[count] = t as u8;
                    count += 1;
                }
            }
            idx += 1;
        }
        if count < n {
            return false;
        }
        for (new_q, &old_q) in discovery[..n].iter().enumerate() {
            for (i, &a) in order.iter().enumerate() {
                out[new_q * k + i] = number[delta[old_q as usize * k + a as usize] as usize];
            }
        }
        true
    }

    /// First state left unnumbered by the last failed renumbering.
    fn first_unreachable(&self) -> usize {
        self.number.iter().position(|&x| x == u8::MAX).unwrap_or(0)
    }
}

/// The canonical string of `dfa` under breadth-first numbering from `start`,
/// reading letters in the given order (a permutation of `0..k`).
pub fn canonical_from_dfa(dfa: &Dfa, start: usize, letter_order: &[usize]) -> Result<CanonicalString> {
    let (n, k) = (dfa.n(), dfa.k());
    if start >= n {
        return Err(Error::StateOutOfRange { state: start, n });
    }
    let mut seen = vec![false; k];
    if letter_order.len() != k {
        return Err(Error::Parse("letter order must be a permutation of the alphabet".into()));
    }
    for &a in letter_order {
        if a >= k {
            return Err(Error::LetterOutOfRange { letter: a, k });
        }
        if std::mem::replace(&mut seen[a], true) {
            return Err(Error::Parse("letter order must be a permutation of the alphabet".into()));
        }
    }
    let order: Vec<u8> = letter_order.iter().map(|&a| a as u8).collect();
    let mut scratch = Renumbering::new(n);
    let mut out = vec![0u8; n * k];
    if !scratch.renumber(n, k, dfa.delta(), start, &order, &mut out) {
        return Err(Error::Unreachable { state: scratch.first_unreachable() });
    }
    Ok(CanonicalString::from_raw(n, k, out))
}

/// The lexicographically least canonical string over all valid start states
/// and all `k!` letter orders. Two automata have equal forms exactly when they
/// are isomorphic up to a state bijection combined with a letter bijection.
pub fn iso_canonical_form(dfa: &Dfa) -> Result<CanonicalString> {
    let (n, k) = (dfa.n(), dfa.k());
    if k > MAX_ENUM_LETTERS {
        return Err(Error::TooLarge { what: "letter count", limit: MAX_ENUM_LETTERS, requested: k });
    }
    if n > 255 {
        return Err(Error::TooLarge { what: "state count", limit: 255, requested: n });
    }
    let orders = permutations(k);
    let mut scratch = Renumbering::new(n);
    let mut out = vec![0u8; n * k];
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n {
        for order in &orders {
            if scratch.renumber(n, k, dfa.delta(), start, order, &mut out) {
                match &best {
                    Some(b) if out.as_slice() >= b.as_slice() => {}
                    _ => best = Some(out.clone()),
                }
            }
        }
    }
    match best {
        Some(symbols) => Ok(CanonicalString::from_raw(n, k, symbols)),
        None => Err(Error::NoValidStartState),
    }
}

/// One work unit of a sharded enumeration: strings whose shard key (the first
/// two symbol blocks read as a base-`n` integer) is `index` modulo `count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    index: u32,
    count: u32,
}

impl Shard {
    /// The trivial shard covering everything.
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    pub fn new(index: u32, count: u32) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::InvalidShard { index, count });
        }
        Ok(Shard { index, count })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn count(&self) -> u32 {
        self.count
    }
}

/// Depth-first generator of the valid canonical strings of one shard, in
/// lexicographic order.
///
/// Prefix feasibility: (R1) restricts the next symbol to `0..=M+1` where `M`
/// is the largest value with `1..=M` all present, and (R2) stays satisfiable
/// at position `i` if and only if `i - M <= (M+1)(k-1)` (the next missing
/// state can still be mentioned before its own row starts).
pub struct CanonicalEnumerator {
    n: usize,
    k: usize,
    len: usize,
    prefix_len: usize,
    shard_index: u64,
    shard_count: u64,
    sym: Vec<u8>,
    /// max_before[i]: the contiguous max M over sym[0..i].
    max_before: Vec<u8>,
    /// key_mod[i]: base-n value of sym[0..i] modulo shard_count.
    key_mod: Vec<u64>,
    started: bool,
    done: bool,
}

/// Starts an enumeration of all valid canonical strings in the shard.
pub fn enumerate_canonical(n: usize, k: usize, shard: Shard) -> Result<CanonicalEnumerator> {
    if n == 0 || n > MAX_ENUM_STATES {
        return Err(Error::TooLarge { what: "enumeration state count", limit: MAX_ENUM_STATES, requested: n });
    }
    if k == 0 || k > MAX_ENUM_LETTERS {
        return Err(Error::TooLarge { what: "enumeration letter count", limit: MAX_ENUM_LETTERS, requested: k });
    }
    let len = n * k;
    let prefix_len = n.min(2) * k;
    Ok(CanonicalEnumerator {
        n,
        k,
        len,
        prefix_len,
        shard_index: shard.index as u64,
        shard_count: shard.count as u64,
        sym: vec![0; len],
        max_before: vec![0; len + 1],
        key_mod: vec![0; prefix_len + 1],
        started: false,
        done: false,
    })
}

impl CanonicalEnumerator {
    /// Advances to the next valid string and returns its symbols, or `None`
    /// when the shard is exhausted. The slice is only valid until the next
    /// call.
    pub fn next_ref(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        let (n, k, len) = (self.n, self.k, self.len);
        let mut i: usize;
        let mut v: usize;
        if self.started {
            i = len - 1;
            v = self.sym[i] as usize + 1;
        } else {
            self.started = true;
            i = 0;
            v = 0;
        }
        loop {
            let m = self.max_before[i] as usize;
            let hi = (m + 1).min(n - 1);
            let mut placed = false;
            while v <= hi {
                let m2 = if v == m + 1 { m + 1 } else { m };
                // (R2) feasibility at the next position.
                if m2 < n - 1 && (i + 1) - m2 > (m2 + 1) * (k - 1) {
                    v += 1;
                    continue;
                }
                if self.shard_count > 1 && i < self.prefix_len {
                    let key = (self.key_mod[i] * n as u64 + v as u64) % self.shard_count;
                    if i + 1 == self.prefix_len && key != self.shard_index {
                        v += 1;
                        continue;
                    }
                    self.key_mod[i + 1] = key;
                }
                self.sym[i] = v as u8;
                self.max_before[i + 1] = m2 as u8;
                placed = true;
                break;
            }
            if placed {
                i += 1;
                if i == len {
                    debug_assert_eq!(self.max_before[len] as usize, n - 1);
                    return Some(&self.sym);
                }
                v = 0;
            } else {
                if i == 0 {
                    self.done = true;
                    return None;
                }
                i -= 1;
                v = self.sym[i] as usize + 1;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Iterator for CanonicalEnumerator {
    type Item = CanonicalString;

    fn next(&mut self) -> Option<CanonicalString> {
        let (n, k) = (self.n, self.k);
        self.next_ref().map(|sym| CanonicalString::from_raw(n, k, sym.to_vec()))
    }
}

/// Counts the valid canonical strings of one shard, splitting the work over
/// `jobs` threads.
pub fn count_canonical(n: usize, k: usize, shard: Shard, jobs: usize) -> Result<u64> {
    enumerate_canonical(n, k, shard)?; // validate parameters up front
    let jobs = jobs.max(1);
    let sub_factor: u64 = if jobs == 1 { 1 } else { jobs as u64 * 8 };
    let next = AtomicU64::new(0);
    let worker = || -> Result<u64> {
        let mut local = 0u64;
        loop {
            let t = next.fetch_add(1, Ordering::Relaxed);
            if t >= sub_factor {
                return Ok(local);
            }
            let mut e = sub_enumerator(n, k, shard, t, sub_factor)?;
            while e.next_ref().is_some() {
                local += 1;
            }
        }
    };
    if jobs == 1 {
        return worker();
    }
    let locals = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs).map(|_| scope.spawn(worker)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("count worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut total = 0;
    for l in locals {
        total += l?;
    }
    Ok(total)
}

// Sub-shard t of a refinement of `shard` into `shard.count * sub_factor`
// classes: keys congruent to shard.index modulo count split disjointly by the
// finer modulus.
fn sub_enumerator(
    n: usize,
    k: usize,
    shard: Shard,
    t: u64,
    sub_factor: u64,
) -> Result<CanonicalEnumerator> {
    let count = shard.count as u64 * sub_factor;
    let index = shard.index as u64 + t * shard.count as u64;
    debug_assert!(index < count);
    let mut e = enumerate_canonical(n, k, Shard::WHOLE)?;
    e.shard_index = index;
    e.shard_count = count;
    Ok(e)
}

/// Options for [`census`].
#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Discard automata with a reset threshold below this value.
    pub min_threshold: Option<usize>,
    /// Restrict the run to one shard; the default covers everything.
    pub shard: Shard,
    /// Count one representative per isomorphism class (state bijection plus
    /// letter bijection). When false, every valid canonical string of a
    /// synchronizing automaton is counted.
    pub dedup_iso: bool,
    /// Worker thread count. The histogram does not depend on it.
    pub jobs: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { min_threshold: None, shard: Shard::WHOLE, dedup_iso: true, jobs: 1 }
    }
}

/// Exhaustive reset-threshold census over all initially-connected automata
/// with `n` states and `k` letters: map threshold -> number of isomorphism
/// classes of synchronizing automata attaining it.
///
/// A class is counted by the one shard that contains its least canonical
/// string, so shard histograms merge additively and the result is identical
/// for every worker count and shard decomposition.
pub fn census(n: usize, k: usize, opts: &CensusOptions) -> Result<CensusHistogram> {
    enumerate_canonical(n, k, opts.shard)?; // validate parameters up front
    let min_threshold = opts.min_threshold.unwrap_or(0);
    let jobs = opts.jobs.max(1);
    let sub_factor: u64 = if jobs == 1 { 1 } else { jobs as u64 * 8 };
    let orders = permutations(k);
    let next = AtomicU64::new(0);

    let worker = || -> Result<BTreeMap<usize, u64>> {
        let mut local: BTreeMap<usize, u64> = BTreeMap::new();
        let mut bfs = SubsetBfs::new();
        let mut scratch = Renumbering::new(n);
        let mut candidate = vec![0u8; n * k];
        loop {
            let t = next.fetch_add(1, Ordering::Relaxed);
            if t >= sub_factor {
                return Ok(local);
            }
            let mut e = sub_enumerator(n, k, opts.shard, t, sub_factor)?;
            while let Some(sym) = e.next_ref() {
                let Some(rt) = bfs.reset_len(n, k, sym) else {
                    continue;
                };
                if rt < min_threshold {
                    continue;
                }
                if opts.dedup_iso {
                    // Count the string only if it is the least canonical string
                    // of its isomorphism class. The enumerated string is itself
                    // the canonical string for (start 0, identity order), so
                    // only the other start/order combinations can beat it.
                    let mut minimal = true;
                    'outer: for start in 0..n {
                        for order in &orders {
                            if start == 0 && order.iter().enumerate().all(|(i, &a)| i == a as usize)
                            {
                                continue;
                            }
                            if scratch.renumber(n, k, sym, start, order, &mut candidate)
                                && candidate.as_slice() < sym
                            {
                                minimal = false;
                                break 'outer;
                            }
                        }
                    }
                    if !minimal {
                        continue;
                    }
                }
                *local.entry(rt).or_insert(0) += 1;
            }
        }
    };

    let meta = CensusMeta {
        states: n,
        letters: Some(k),
        min_value: opts.min_threshold,
        shard_count: opts.shard.count,
    };
    let mut hist = CensusHistogram::for_shard(meta, opts.shard.index);
    if jobs == 1 {
        for (value, count) in worker()? {
            hist.add(value, count);
        }
        return Ok(hist);
    }
    let locals = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs).map(|_| scope.spawn(worker)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect::<Vec<_>>()
    });
    for local in locals {
        for (value, count) in local? {
            hist.add(value, count);
        }
    }
    Ok(hist)
}
