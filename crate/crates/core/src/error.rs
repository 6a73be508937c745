use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state {state} out of range for an automaton with {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("letter {letter} out of range for an alphabet of {k} letters")]
    LetterOutOfRange { letter: usize, k: usize },
    #[error("{what} supports at most {limit}, got {requested}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("automaton is not synchronizing")]
    NotSynchronizing,
    #[error("state {state} is not reachable from the chosen start state")]
    Unreachable { state: usize },
    #[error("no start state reaches every state")]
    NoValidStartState,
    #[error("series {series} is not defined for n = {n}: {reason}")]
    InvalidSeriesParameter {
        series: &'static str,
        n: usize,
        reason: &'static str,
    },
    #[error("unknown series name `{0}`")]
    UnknownSeries(String),
    #[error("action word for a derived letter must be non-empty")]
    EmptyActionWord,
    #[error("vertex {vertex} has no outgoing edge")]
    NoOutgoingEdge { vertex: usize },
    #[error("vertex {vertex} has out-degree {out_degree}, which exceeds {k} letters")]
    OutDegreeExceedsLetters {
        vertex: usize,
        out_degree: usize,
        k: usize,
    },
    #[error("expected an automaton with exactly {expected} letters, got {found}")]
    WrongLetterCount { expected: usize, found: usize },
    #[error("state set is not closed: state {state} leaves it under letter {letter}")]
    NotClosed { state: usize, letter: usize },
    #[error("generators {a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("generator {0} must be at least 2")]
    GeneratorTooSmall(u64),
    #[error("invalid shard {index}/{count}")]
    InvalidShard { index: u32, count: u32 },
    #[error("histograms with different parameters cannot be merged")]
    IncompatibleHistograms,
    #[error("shard coverage overlaps; refusing to merge")]
    OverlappingShards,
}

pub type Result<T> = std::result::Result<T, Error>;
