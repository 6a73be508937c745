//! The nine 2-letter automata series with extremal or near-extremal reset
//! thresholds, their closed-form thresholds, explicit reset words of exactly
//! that length, and a verifier that checks all three against exact search.
//!
//! States are 0-indexed here; the classical presentations are 1-indexed, so
//! state `i` below corresponds to state `i + 1` there. Letter 0 is `a`,
//! letter 1 is `b`.

use std::fmt;
use std::str::FromStr;

use crate::automata::{Dfa, Word};
use crate::error::{Error, Result};
use crate::sync::{reset_threshold, ResetResult};

/// Names of the automata series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesName {
    C,
    W,
    E,
    H,
    DPrime,
    DDouble,
    F,
    B,
    G,
}

impl SeriesName {
    pub const ALL: [SeriesName; 9] = [
        SeriesName::C,
        SeriesName::W,
        SeriesName::E,
        SeriesName::H,
        SeriesName::DPrime,
        SeriesName::DDouble,
        SeriesName::F,
        SeriesName::B,
        SeriesName::G,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            SeriesName::C => "c",
            SeriesName::W => "w",
            SeriesName::E => "e",
            SeriesName::H => "h",
            SeriesName::DPrime => "dprime",
            SeriesName::DDouble => "ddouble",
            SeriesName::F => "f",
            SeriesName::B => "b",
            SeriesName::G => "g",
        }
    }

    /// Smallest state count the series is defined for.
    pub fn min_n(&self) -> usize {
        match self {
            SeriesName::F | SeriesName::B | SeriesName::G => 5,
            _ => 4,
        }
    }

    /// Whether the series exists only for odd state counts.
    pub fn requires_odd(&self) -> bool {
        matches!(self, SeriesName::F | SeriesName::B | SeriesName::G)
    }

    /// State counts the series is defined for within `min..=max`.
    pub fn valid_range(&self, max: usize) -> impl Iterator<Item = usize> + '_ {
        let requires_odd = self.requires_odd();
        (self.min_n()..=max).filter(move |n| !requires_odd || n % 2 == 1)
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(SeriesName::C),
            "w" => Ok(SeriesName::W),
            "e" => Ok(SeriesName::E),
            "h" => Ok(SeriesName::H),
            "dprime" | "d'" => Ok(SeriesName::DPrime),
            "ddouble" | "d''" => Ok(SeriesName::DDouble),
            "f" => Ok(SeriesName::F),
            "b" => Ok(SeriesName::B),
            "g" => Ok(SeriesName::G),
            other => Err(Error::UnknownSeries(other.into())),
        }
    }
}

fn validate(name: SeriesName, n: usize) -> Result<()> {
    if n < name.min_n() {
        return Err(Error::InvalidSeriesParameter {
            series: name.token(),
            n,
            reason: "state count below the series minimum",
        });
    }
    if name.requires_odd() && n.is_multiple_of(2) {
        return Err(Error::InvalidSeriesParameter {
            series: name.token(),
            n,
            reason: "series is defined for odd state counts only",
        });
    }
    Ok(())
}

/// Builds the automaton of the series on `n` states.
pub fn build(name: SeriesName, n: usize) -> Result<Dfa> {
    validate(name, n)?;
    let cyclic = |q: usize| (q + 1) % n;
    match name {
        SeriesName::C => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                if q == n - 1 { 0 } else { q }
            } else {
                cyclic(q)
            }
        }),
        SeriesName::W => Dfa::from_fn(n, 2, |q, a| {
            if q < n - 1 {
                q + 1
            } else if a == 0 {
                1
            } else {
                0
            }
        }),
        // Letter b skips the transient state 1: the cycle runs
        // 0 -> 2 -> 3 -> ... -> n-1 -> 0, and only letter a enters state 1.
        SeriesName::E => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                match q {
                    0 => 1,
                    1 => 2,
                    _ => q,
                }
            } else if q == 0 {
                2
            } else {
                cyclic(q)
            }
        }),
        SeriesName::H => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                match q {
                    0 => n - 1,
                    q if q == n - 1 => 0,
                    _ => q,
                }
            } else if q < n - 2 {
                q + 1
            } else if q == n - 2 {
                0
            } else {
                2
            }
        }),
        SeriesName::DPrime => Dfa::from_fn(n, 2, |q, a| {
            if q <= n - 3 {
                q + 1
            } else if q == n - 2 {
                if a == 0 { 0 } else { n - 1 }
            } else if a == 0 {
                1
            } else {
                0
            }
        }),
        SeriesName::DDouble => Dfa::from_fn(n, 2, |q, a| {
            if q <= n - 3 {
                q + 1
            } else if q == n - 2 {
                if a == 0 { 0 } else { n - 1 }
            } else if a == 0 {
                0
            } else {
                1
            }
        }),
        SeriesName::F => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                if q == n - 1 { 1 } else { q }
            } else {
                cyclic(q)
            }
        }),
        SeriesName::B => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                match q {
                    q if q == n - 2 => 0,
                    q if q == n - 1 => 1,
                    _ => q,
                }
            } else {
                cyclic(q)
            }
        }),
        SeriesName::G => Dfa::from_fn(n, 2, |q, a| {
            if a == 0 {
                match q {
                    q if q == n - 3 => 0,
                    q if q == n - 1 => 2,
                    _ => q + 1,
                }
            } else {
                cyclic(q)
            }
        }),
    }
}

/// The closed-form reset threshold claimed for the series at `n`.
pub fn claimed_threshold(name: SeriesName, n: usize) -> Result<usize> {
    validate(name, n)?;
    Ok(match name {
        SeriesName::C => (n - 1) * (n - 1),
        SeriesName::W | SeriesName::F => n * n - 3 * n + 3,
        SeriesName::E | SeriesName::DDouble | SeriesName::B => n * n - 3 * n + 2,
        SeriesName::H => n * n - 4 * n + 6,
        SeriesName::DPrime => n * n - 3 * n + 4,
        SeriesName::G => n * n - 4 * n + 7,
    })
}

const A: u8 = 0;
const B_LETTER: u8 = 1;

fn run(out: &mut Vec<u8>, letter: u8, count: usize) {
    out.extend(std::iter::repeat_n(letter, count));
}

/// The explicit reset word claimed for the series at `n`; its length equals
/// [`claimed_threshold`].
pub fn claimed_word(name: SeriesName, n: usize) -> Result<Word> {
    validate(name, n)?;
    let mut w = Vec::new();
    match name {
        // (a b^{n-1})^{n-2} a
        SeriesName::C => {
            for _ in 0..n - 2 {
                w.push(A);
                run(&mut w, B_LETTER, n - 1);
            }
            w.push(A);
        }
        // (a b^{n-2})^{n-2} a
        SeriesName::W | SeriesName::F => {
            for _ in 0..n - 2 {
                w.push(A);
                run(&mut w, B_LETTER, n - 2);
            }
            w.push(A);
        }
        // (a^2 b^{n-2})^{n-3} a^2
        SeriesName::E => {
            for _ in 0..n - 3 {
                run(&mut w, A, 2);
                run(&mut w, B_LETTER, n - 2);
            }
            run(&mut w, A, 2);
        }
        // b (a b^{n-2})^{n-3} a b
        SeriesName::H => {
            w.push(B_LETTER);
            for _ in 0..n - 3 {
                w.push(A);
                run(&mut w, B_LETTER, n - 2);
            }
            w.push(A);
            w.push(B_LETTER);
        }
        // (a b^{n-2})^{n-2} b a
        SeriesName::DPrime => {
            for _ in 0..n - 2 {
                w.push(A);
                run(&mut w, B_LETTER, n - 2);
            }
            w.push(B_LETTER);
            w.push(A);
        }
        // (b a^{n-1})^{n-3} b a
        SeriesName::DDouble => {
            for _ in 0..n - 3 {
                w.push(B_LETTER);
                run(&mut w, A, n - 1);
            }
            w.push(B_LETTER);
            w.push(A);
        }
        // (a b^{n-2})^{(n-3)/2} a b^{n-3} (a b^{n-2})^{(n-3)/2} a
        SeriesName::B => {
            let half = (n - 3) / 2;
            for _ in 0..half {
                w.push(A);
                run(&mut w, B_LETTER, n - 2);
            }
            w.push(A);
            run(&mut w, B_LETTER, n - 3);
            for _ in 0..half {
                w.push(A);
                run(&mut w, B_LETTER, n - 2);
            }
            w.push(A);
        }
        // a^2 (b a b a^{n-3})^{n-4} b a b a^2
        SeriesName::G => {
            run(&mut w, A, 2);
            for _ in 0..n - 4 {
                w.push(B_LETTER);
                w.push(A);
                w.push(B_LETTER);
                run(&mut w, A, n - 3);
            }
            w.push(B_LETTER);
            w.push(A);
            w.push(B_LETTER);
            run(&mut w, A, 2);
        }
    }
    Ok(Word::from_raw(w))
}

/// Outcome of checking one series instance against exact computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub name: SeriesName,
    pub n: usize,
    pub claimed: usize,
    /// Exact threshold, `None` if the automaton failed to synchronize.
    pub computed: Option<usize>,
    /// The claimed word maps the full state set to a singleton.
    pub word_synchronizes: bool,
    /// The claimed word's length equals the exact threshold.
    pub word_minimal: bool,
}

impl SeriesReport {
    pub fn all_ok(&self) -> bool {
        self.computed == Some(self.claimed) && self.word_synchronizes && self.word_minimal
    }
}

/// Checks the claimed threshold and word of one series instance.
pub fn verify_series(name: SeriesName, n: usize) -> Result<SeriesReport> {
    let dfa = build(name, n)?;
    let claimed = claimed_threshold(name, n)?;
    let word = claimed_word(name, n)?;
    let computed = match reset_threshold(&dfa, None) {
        ResetResult::Reset { threshold, .. } => Some(threshold),
        _ => None,
    };
    let word_synchronizes = dfa.image(dfa.full_set(), &word)?.is_singleton();
    let word_minimal = computed == Some(word.len());
    Ok(SeriesReport { name, n, claimed, computed, word_synchronizes, word_minimal })
}
