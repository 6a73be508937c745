//! Exact analysis of synchronizing finite automata and primitive digraphs:
//! reset thresholds with witness words, digraph exponents, the classical
//! slowly-synchronizing series and their verification, and exhaustive
//! censuses of reset thresholds and exponents up to isomorphism.

pub mod automata;
pub mod digraph;
pub mod enumeration;
pub mod error;
pub mod histogram;
pub mod series;
pub mod sync;
pub mod transforms;

pub use automata::{Dfa, StateSet, Word, MAX_LETTERS, MAX_STATES};
pub use digraph::{
    colorings, colorings_up_to_iso, digraph_census, digraph_iso_canonical, digraph_series,
    exponent, is_primitive, is_strongly_connected, power, underlying_digraph, Digraph,
    DigraphCensusOptions, DigraphKey, DigraphSeries,
};
pub use enumeration::{
    canonical_from_dfa, census, count_canonical, dfa_from_canonical, enumerate_canonical,
    iso_canonical_form, validate_canonical, CanonicalEnumerator, CanonicalString, CensusOptions,
    Shard,
};
pub use error::{Error, Result};
pub use histogram::{CensusHistogram, CensusMeta};
pub use series::{build, claimed_threshold, claimed_word, verify_series, SeriesName, SeriesReport};
pub use sync::{is_synchronizing, reset_target_states, reset_threshold, ResetResult};
pub use transforms::{
    check_simple_idempotent_bound, derive, frobenius, representable, SimpleIdempotentReport,
};
