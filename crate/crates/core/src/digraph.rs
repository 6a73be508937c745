//! Digraphs (loops allowed, no multiple edges), primitivity and exponents,
//! digraph powers, the named series with extremal exponents, colorings, and an
//! exhaustive exponent census over all digraphs with a given vertex count.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::automata::{Dfa, MAX_STATES};
use crate::enumeration::iso_canonical_form;
use crate::error::{Error, Result};
use crate::histogram::{CensusHistogram, CensusMeta};

/// A directed graph on vertices `0..n`, stored as one successor bit mask per
/// vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    rows: Vec<u64>,
}

impl Digraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::TooLarge {
                what: "vertex count",
                limit: MAX_STATES,
                requested: n,
            });
        }
        Ok(Digraph { n, rows: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut d = Digraph::new(n)?;
        for &(u, v) in edges {
            d.add_edge(u, v)?;
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::StateOutOfRange { state: u, n: self.n });
        }
        if v >= self.n {
            return Err(Error::StateOutOfRange { state: v, n: self.n });
        }
        self.rows[u] |= 1u64 << v;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] & (1u64 << v) != 0
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let row = self.rows[u];
            (0..self.n).filter_map(move |v| (row & (1u64 << v) != 0).then_some((u, v)))
        })
    }

    /// Parses the text format: first line `n`, then `n` rows of `n` characters
    /// `0`/`1` (incidence matrix).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing vertex count".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid vertex count `{}`", header.trim())))?;
        let mut d = Digraph::new(n)?;
        for u in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing matrix row {u}")))?
                .trim();
            if line.len() != n {
                return Err(Error::Parse(format!(
                    "matrix row {u} must have {n} characters, got {}",
                    line.len()
                )));
            }
            for (v, c) in line.chars().enumerate() {
                match c {
                    '1' => d.rows[u] |= 1u64 << v,
                    '0' => {}
                    _ => return Err(Error::Parse(format!("invalid matrix character `{c}`"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after matrix rows".into()));
        }
        Ok(d)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for u in 0..self.n {
            for v in 0..self.n {
                write!(f, "{}", if self.has_edge(u, v) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph({} vertices, {:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// The digraph of an automaton: an edge `(q, q')` for every transition,
/// parallel letter edges collapsed.
pub fn underlying_digraph(dfa: &Dfa) -> Digraph {
    let mut d = Digraph::new(dfa.n()).expect("dfa state count is within digraph capacity");
    for q in 0..dfa.n() {
        for a in 0..dfa.k() {
            d.rows[q] |= 1u64 << dfa.step(q, a);
        }
    }
    d
}

fn reach_from(rows: &[u64], start: usize) -> u64 {
    let mut reach = 1u64 << start;
    let mut frontier = reach;
    while frontier != 0 {
        let mut grown = 0u64;
        let mut rest = frontier;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grown |= rows[v];
        }
        frontier = grown & !reach;
        reach |= grown;
    }
    reach
}

fn strongly_connected_rows(rows: &[u64], n: usize) -> bool {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if reach_from(rows, 0) != full {
        return false;
    }
    let mut transposed = vec![0u64; n];
    for (u, &row) in rows.iter().enumerate() {
        let mut rest = row;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            transposed[v] |= 1u64 << u;
        }
    }
    reach_from(&transposed, 0) == full
}

pub fn is_strongly_connected(d: &Digraph) -> bool {
    strongly_connected_rows(&d.rows, d.n)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period test for a strongly connected digraph: BFS levels from vertex 0, gcd
/// of `level(u) + 1 - level(v)` over all edges `(u, v)`.
fn aperiodic_rows(rows: &[u64], n: usize) -> bool {
    let mut level = vec![0i64; n];
    let mut seen = 1u64 << 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let mut rest = rows[u];
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if seen & (1u64 << v) == 0 {
                seen |= 1u64 << v;
                level[v] = level[u] + 1;
                queue.push(v);
            }
        }
    }
    let mut g = 0u64;
    for (u, &row) in rows.iter().enumerate() {
        let mut rest = row;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g = gcd(g, (level[u] + 1 - level[v]).unsigned_abs());
        }
    }
    g == 1
}

/// Strong connectivity plus cycle-length gcd equal to 1.
pub fn is_primitive(d: &Digraph) -> bool {
    strongly_connected_rows(&d.rows, d.n) && aperiodic_rows(&d.rows, d.n)
}

fn multiply_rows(left: &[u64], right: &[u64], out: &mut [u64]) {
    for (o, &row) in out.iter_mut().zip(left.iter()) {
        let mut acc = 0u64;
        let mut rest = row;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc |= right[j];
        }
        *o = acc;
    }
}

/// The `t`-th power: an edge `(u, v)` iff there is a directed walk of length
/// exactly `t` from `u` to `v`. `t = 0` yields the identity relation.
pub fn power(d: &Digraph, t: usize) -> Digraph {
    let n = d.n;
    let mut cur: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut next = vec![0u64; n];
    for _ in 0..t {
        multiply_rows(&cur, &d.rows, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    Digraph { n, rows: cur }
}

fn complete_rows(rows: &[u64], n: usize) -> bool {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rows.iter().all(|&r| r == full)
}

fn exponent_scan(rows: &[u64], n: usize) -> usize {
    let mut cur = rows.to_vec();
    let mut next = vec![0u64; n];
    // A primitive n-digraph reaches a complete power by (n-1)^2 + 1; the extra
    // slack surfaces a bound violation as a loud failure instead of hiding it.
    let hard_cap = 2 * n * n + 2;
    for t in 1..=hard_cap {
        if complete_rows(&cur, n) {
            return t;
        }
        multiply_rows(&cur, rows, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    panic!("primitive digraph failed to reach a complete power within {hard_cap} steps");
}

/// The least `t >= 1` with `d^t` complete with loops, or `None` if `d` is not
/// primitive.
pub fn exponent(d: &Digraph) -> Option<usize> {
    if !is_primitive(d) {
        return None;
    }
    Some(exponent_scan(&d.rows, d.n))
}

/// Named digraph series with extremal exponents. `V`, `R`, `G`, `GPrime` are
/// primitive only for odd vertex counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigraphSeries {
    W,
    D,
    V,
    R,
    G,
    GPrime,
}

impl DigraphSeries {
    pub const ALL: [DigraphSeries; 6] = [
        DigraphSeries::W,
        DigraphSeries::D,
        DigraphSeries::V,
        DigraphSeries::R,
        DigraphSeries::G,
        DigraphSeries::GPrime,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            DigraphSeries::W => "w",
            DigraphSeries::D => "d",
            DigraphSeries::V => "v",
            DigraphSeries::R => "r",
            DigraphSeries::G => "g",
            DigraphSeries::GPrime => "gprime",
        }
    }
}

impl FromStr for DigraphSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "w" => Ok(DigraphSeries::W),
            "d" => Ok(DigraphSeries::D),
            "v" => Ok(DigraphSeries::V),
            "r" => Ok(DigraphSeries::R),
            "g" => Ok(DigraphSeries::G),
            "gprime" | "g'" => Ok(DigraphSeries::GPrime),
            other => Err(Error::UnknownSeries(other.into())),
        }
    }
}

/// Builds a digraph of the given series on `n` vertices (0-indexed; vertex `i`
/// here is vertex `i + 1` in the usual 1-indexed presentation).
pub fn digraph_series(name: DigraphSeries, n: usize) -> Result<Digraph> {
    let min = match name {
        DigraphSeries::W | DigraphSeries::D => 3,
        _ => 4,
    };
    if n < min {
        return Err(Error::InvalidSeriesParameter {
            series: name.token(),
            n,
            reason: "vertex count below the series minimum",
        });
    }
    let mut d = Digraph::new(n)?;
    for i in 0..n - 1 {
        d.add_edge(i, i + 1)?;
    }
    match name {
        DigraphSeries::W => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 1)?;
        }
        DigraphSeries::D => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 1)?;
            d.add_edge(n - 2, 0)?;
        }
        DigraphSeries::V => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 2)?;
        }
        DigraphSeries::R => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 2)?;
            d.add_edge(n - 2, 1)?;
        }
        DigraphSeries::G => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 2)?;
            d.add_edge(n - 3, 0)?;
        }
        DigraphSeries::GPrime => {
            d.add_edge(n - 1, 0)?;
            d.add_edge(n - 1, 2)?;
            d.add_edge(n - 3, 0)?;
            d.add_edge(n - 2, 1)?;
        }
    }
    Ok(d)
}

/// All automata whose digraph is exactly `d`: every assignment of the `k`
/// letters onto the out-edges of each vertex such that every out-edge receives
/// at least one letter. Deterministic order.
pub fn colorings(d: &Digraph, k: usize) -> Result<Vec<Dfa>> {
    if k == 0 || k > 8 {
        return Err(Error::TooLarge { what: "coloring letter count", limit: 8, requested: k });
    }
    let n = d.n;
    let mut targets: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let out: Vec<usize> = (0..n).filter(|&w| d.has_edge(v, w)).collect();
        if out.is_empty() {
            return Err(Error::NoOutgoingEdge { vertex: v });
        }
        if out.len() > k {
            return Err(Error::OutDegreeExceedsLetters {
                vertex: v,
                out_degree: out.len(),
                k,
            });
        }
        targets.push(out);
    }
    // Per-vertex surjective letter -> out-edge assignments, in lexicographic order.
    let mut choices: Vec<Vec<Vec<u8>>> = Vec::with_capacity(n);
    for out in &targets {
        let deg = out.len() as u64;
        let mut valid = Vec::new();
        for code in 0..deg.pow(k as u32) {
            let mut assignment = vec![0u8; k];
            let mut c = code;
            for i in (0..k).rev() {
                assignment[i] = (c % deg) as u8;
                c /= deg;
            }
            let mut covered = vec![false; deg as usize];
            for &e in &assignment {
                covered[e as usize] = true;
            }
            if covered.iter().all(|&b| b) {
                valid.push(assignment);
            }
        }
        choices.push(valid);
    }
    let total: usize = choices.iter().map(|c| c.len()).product();
    if total > 2_000_000 {
        return Err(Error::TooLarge { what: "coloring enumeration", limit: 2_000_000, requested: total });
    }
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    loop {
        let mut entries = Vec::with_capacity(n * k);
        for v in 0..n {
            let assignment = &choices[v][idx[v]];
            for a in 0..k {
                entries.push(targets[v][assignment[a] as usize]);
            }
        }
        out.push(Dfa::from_table(n, k, &entries)?);
        // odometer, vertex 0 most significant
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
}

/// One representative per isomorphism class (state bijection plus letter
/// bijection) of the colorings of `d`, in canonical-string order.
pub fn colorings_up_to_iso(d: &Digraph, k: usize) -> Result<Vec<Dfa>> {
    let all = colorings(d, k)?;
    let mut forms = std::collections::BTreeSet::new();
    for dfa in &all {
        forms.insert(iso_canonical_form(dfa)?);
    }
    Ok(forms.iter().map(crate::enumeration::dfa_from_canonical).collect())
}

/// Canonical form of a digraph under vertex permutation: the lexicographically
/// least row-major incidence bit string.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DigraphKey {
    n: usize,
    bits: u64,
}

impl DigraphKey {
    pub fn to_digraph(&self) -> Digraph {
        let n = self.n;
        let mut d = Digraph::new(n).expect("key vertex count is valid");
        for u in 0..n {
            for v in 0..n {
                if self.bits >> ((n - 1 - u) * n + (n - 1 - v)) & 1 != 0 {
                    d.rows[u] |= 1u64 << v;
                }
            }
        }
        d
    }
}

impl fmt::Display for DigraphKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in (0..self.n * self.n).rev() {
            write!(f, "{}", (self.bits >> p) & 1)?;
        }
        Ok(())
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<u8>> {
    // Lexicographic order, identity first.
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v as u8);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

fn perm_key_direct(rows: &[u64], perm: &[u8]) -> u64 {
    let mut key = 0u64;
    for &pi in perm.iter() {
        let row = rows[pi as usize];
        for &pj in perm.iter() {
            key = (key << 1) | (row >> pj & 1);
        }
    }
    key
}

/// The canonical form of `d` over all vertex permutations. Equal keys
/// characterize isomorphic digraphs. Supports up to 8 vertices.
pub fn digraph_iso_canonical(d: &Digraph) -> Result<DigraphKey> {
    let n = d.n;
    if n > 8 {
        return Err(Error::TooLarge { what: "digraph canonical form", limit: 8, requested: n });
    }
    let mut best = u64::MAX;
    for perm in permutations(n) {
        best = best.min(perm_key_direct(&d.rows, &perm));
    }
    Ok(DigraphKey { n, bits: best })
}

/// Options for [`digraph_census`].
#[derive(Clone, Debug)]
pub struct DigraphCensusOptions {
    /// Count one representative per isomorphism class (default) instead of
    /// every labelled digraph.
    pub dedup_iso: bool,
    /// Skip non-primitive digraphs (default). When false they are counted
    /// under key 0 (exponents are always >= 1, so the key is free).
    pub primitive_only: bool,
    /// Worker thread count. The histogram does not depend on it.
    pub jobs: usize,
}

impl Default for DigraphCensusOptions {
    fn default() -> Self {
        DigraphCensusOptions { dedup_iso: true, primitive_only: true, jobs: 1 }
    }
}

const DIGRAPH_CENSUS_LIMIT: usize = 5;

/// Exhaustive exponent census over all `2^(n*n)` digraphs on `n` vertices.
/// Returns the histogram exponent -> count of (isomorphism classes of)
/// primitive digraphs with that exponent.
pub fn digraph_census(n: usize, opts: &DigraphCensusOptions) -> Result<CensusHistogram> {
    if n == 0 || n > DIGRAPH_CENSUS_LIMIT {
        return Err(Error::TooLarge {
            what: "digraph census vertex count",
            limit: DIGRAPH_CENSUS_LIMIT,
            requested: n,
        });
    }
    let total: u64 = 1u64 << (n * n);
    let perms = permutations(n);
    // Per permutation, a table over all row values: permuted columns written
    // most-significant-first so that integer order matches bit-string order.
    let mut colmaps: Vec<Vec<u16>> = Vec::with_capacity(perms.len());
    for perm in &perms {
        let mut map = vec![0u16; 1 << n];
        for (r, slot) in map.iter_mut().enumerate() {
            let mut s = 0u16;
            for &pj in perm.iter() {
                s = (s << 1) | ((r >> pj) & 1) as u16;
            }
            *slot = s;
        }
        colmaps.push(map);
    }
    let slots = (n - 1) * (n - 1) + 2;
    let jobs = opts.jobs.max(1);
    let chunk_count = if jobs == 1 { 1u64 } else { (jobs as u64) * 8 };
    let chunk_size = total.div_ceil(chunk_count);
    let next_chunk = AtomicU64::new(0);

    let worker = |local: &mut Vec<u64>| {
        let row_mask = (1u64 << n) - 1;
        let mut rows = [0u64; DIGRAPH_CENSUS_LIMIT];
        loop {
            let chunk = next_chunk.fetch_add(1, Ordering::Relaxed);
            let start = chunk * chunk_size;
            if start >= total {
                return;
            }
            let end = (start + chunk_size).min(total);
            'code: for code in start..end {
                for (i, row) in rows[..n].iter_mut().enumerate() {
                    *row = (code >> (i * n)) & row_mask;
                }
                let primitive = rows[..n].iter().all(|&r| r != 0)
                    && strongly_connected_rows(&rows[..n], n)
                    && aperiodic_rows(&rows[..n], n);
                let slot = if primitive {
                    exponent_scan(&rows[..n], n)
                } else if opts.primitive_only {
                    continue;
                } else {
                    0
                };
                if opts.dedup_iso {
                    let self_key = perm_key_direct(&rows[..n], &perms[0]);
                    for (perm, colmap) in perms.iter().zip(&colmaps).skip(1) {
                        let mut key = 0u64;
                        for &pi in perm.iter() {
                            key = (key << n) | colmap[rows[pi as usize] as usize] as u64;
                        }
                        if key < self_key {
                            continue 'code;
                        }
                    }
                }
                local[slot] += 1;
            }
        }
    };

    let mut totals = vec![0u64; slots];
    if jobs == 1 {
        worker(&mut totals);
    } else {
        let locals = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|_| {
                    scope.spawn(|| {
                        let mut local = vec![0u64; slots];
                        worker(&mut local);
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect::<Vec<_>>()
        });
        for local in locals {
            for (t, l) in totals.iter_mut().zip(local) {
                *t += l;
            }
        }
    }

    let mut hist = CensusHistogram::new(CensusMeta {
        states: n,
        letters: None,
        min_value: None,
        shard_count: 1,
    });
    for (value, &count) in totals.iter().enumerate() {
        if count > 0 {
            hist.add(value, count);
        }
    }
    Ok(hist)
}
