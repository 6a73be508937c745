//! Census histograms: value (reset threshold or exponent) to count of
//! isomorphism classes, plus the metadata needed to merge shard results
//! safely.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// What a histogram was computed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusMeta {
    /// State count (automata census) or vertex count (digraph census).
    pub states: usize,
    /// Letter count; `None` for digraph censuses.
    pub letters: Option<usize>,
    /// Values below this were discarded during the run.
    pub min_value: Option<usize>,
    /// Number of shards the enumeration space was split into. A complete
    /// run is a single shard.
    pub shard_count: u32,
}

/// Map from a census value to the number of classes attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusHistogram {
    counts: BTreeMap<usize, u64>,
    covered: BTreeSet<u32>,
    meta: CensusMeta,
}

impl CensusHistogram {
    /// An empty histogram covering all `meta.shard_count` shards.
    pub fn new(meta: CensusMeta) -> Self {
        let covered = (0..meta.shard_count).collect();
        CensusHistogram { counts: BTreeMap::new(), covered, meta }
    }

    /// An empty histogram covering a single shard.
    pub fn for_shard(meta: CensusMeta, index: u32) -> Self {
        assert!(index < meta.shard_count);
        let covered = std::iter::once(index).collect();
        CensusHistogram { counts: BTreeMap::new(), covered, meta }
    }

    pub fn meta(&self) -> &CensusMeta {
        &self.meta
    }

    /// Whether every shard contributed.
    pub fn is_complete(&self) -> bool {
        self.covered.len() == self.meta.shard_count as usize
    }

    pub fn add(&mut self, value: usize, count: u64) {
        if count > 0 {
            *self.counts.entry(value).or_insert(0) += count;
        }
    }

    pub fn increment(&mut self, value: usize) {
        self.add(value, 1);
    }

    pub fn count(&self, value: usize) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn max_value(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `(value, count)` pairs in descending value order.
    pub fn iter_descending(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().rev().map(|(&v, &c)| (v, c))
    }

    /// Adds another shard's counts. The dedup strategy (count a class only in
    /// the shard holding its canonical string) keeps contributions disjoint,
    /// so pointwise addition is sound; overlapping coverage is refused.
    pub fn merge(&mut self, other: &CensusHistogram) -> Result<()> {
        if self.meta != other.meta {
            return Err(Error::IncompatibleHistograms);
        }
        if !self.covered.is_disjoint(&other.covered) {
            return Err(Error::OverlappingShards);
        }
        self.covered.extend(other.covered.iter().copied());
        for (&value, &count) in &other.counts {
            self.add(value, count);
        }
        Ok(())
    }

    /// Renders a TSV table: a header line, then one `value<TAB>count` row per
    /// non-zero value in descending order.
    pub fn to_tsv(&self, value_header: &str) -> String {
        let mut out = format!("{value_header}\tcount\n");
        for (value, count) in self.iter_descending() {
            out.push_str(&format!("{value}\t{count}\n"));
        }
        out
    }
}
