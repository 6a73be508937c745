//! Derived automata (new letters acting as words of the original automaton),
//! the threshold bound for automata with one non-identity idempotent letter
//! and one permutation letter, and the two-generator Frobenius machinery the
//! lower-bound arguments rest on.

use crate::automata::{Dfa, Word};
use crate::error::{Error, Result};
use crate::sync::reset_threshold;

/// The automaton on the same states whose letter `i` acts as `actions[i]`
/// does in `dfa`.
pub fn derive(dfa: &Dfa, actions: &[Word]) -> Result<Dfa> {
    if actions.is_empty() {
        return Err(Error::EmptyActionWord);
    }
    for w in actions {
        if w.is_empty() {
            return Err(Error::EmptyActionWord);
        }
    }
    let n = dfa.n();
    let mut entries = Vec::with_capacity(n * actions.len());
    for q in 0..n {
        for w in actions {
            entries.push(dfa.apply(q, w)?);
        }
    }
    Dfa::from_table(n, actions.len(), &entries)
}

/// Result of checking the derived-automaton threshold bound on a 2-letter
/// automaton where letter `a` fixes all states but one and letter `b` is a
/// permutation: replacing the letters by `b` and `ab` lowers the reset
/// threshold to at most `t - n + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleIdempotentReport {
    /// Letter 0 fixes exactly `n - 1` states and letter 1 is a permutation.
    pub applicable: bool,
    pub base_threshold: Option<usize>,
    pub derived_threshold: Option<usize>,
    /// `derived <= base - n + 2`; `None` when not applicable or either
    /// automaton is not synchronizing.
    pub bound_holds: Option<bool>,
}

/// Checks the bound above on a 2-letter automaton.
pub fn check_simple_idempotent_bound(dfa: &Dfa) -> Result<SimpleIdempotentReport> {
    if dfa.k() != 2 {
        return Err(Error::WrongLetterCount { expected: 2, found: dfa.k() });
    }
    let n = dfa.n();
    let moved = (0..n).filter(|&q| dfa.step(q, 0) != q).count();
    let applicable = moved == 1 && dfa.is_permutation_letter(1)?;
    if !applicable {
        return Ok(SimpleIdempotentReport {
            applicable: false,
            base_threshold: None,
            derived_threshold: None,
            bound_holds: None,
        });
    }
    let base_threshold = reset_threshold(dfa, None).threshold();
    let derived = derive(dfa, &[Word::parse("b")?, Word::parse("ab")?])?;
    let derived_threshold = reset_threshold(&derived, None).threshold();
    let bound_holds = match (base_threshold, derived_threshold) {
        (Some(t), Some(s)) => Some(s + n <= t + 2),
        _ => None,
    };
    Ok(SimpleIdempotentReport { applicable, base_threshold, derived_threshold, bound_holds })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The largest integer not expressible as a non-negative combination of two
/// coprime generators: `a * b - a - b`.
pub fn frobenius(a: u64, b: u64) -> Result<u64> {
    if a < 2 {
        return Err(Error::GeneratorTooSmall(a));
    }
    if b < 2 {
        return Err(Error::GeneratorTooSmall(b));
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime { a, b });
    }
    Ok(a * b - a - b)
}

/// Whether `x = alpha * a + beta * b` for some non-negative integers `alpha`,
/// `beta`. Both generators must be at least 1; direct search, intended for the
/// small values the threshold arguments need.
pub fn representable(x: u64, a: u64, b: u64) -> bool {
    debug_assert!(a >= 1 && b >= 1);
    let mut rest = x;
    loop {
        if rest.is_multiple_of(b) {
            return true;
        }
        if rest < a {
            return false;
        }
        rest -= a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::StateSet;
    use crate::enumeration::iso_canonical_form;
    use crate::series::{build, claimed_threshold, SeriesName};
    use crate::sync::ResetResult;

    #[test]
    fn deriving_with_the_original_letters_is_the_identity() {
        let dfa = build(SeriesName::H, 6).unwrap();
        let same = derive(&dfa, &[Word::parse("a").unwrap(), Word::parse("b").unwrap()]).unwrap();
        assert_eq!(same, dfa);
        // A single action gives the sub-alphabet restriction.
        let only_b = derive(&dfa, &[Word::parse("b").unwrap()]).unwrap();
        assert_eq!(only_b.k(), 1);
        for q in 0..6 {
            assert_eq!(only_b.step(q, 0), dfa.step(q, 1));
        }
    }

    #[test]
    fn empty_actions_are_rejected() {
        let dfa = build(SeriesName::C, 4).unwrap();
        assert_eq!(derive(&dfa, &[]), Err(Error::EmptyActionWord));
        assert_eq!(
            derive(&dfa, &[Word::parse("a").unwrap(), Word::empty()]),
            Err(Error::EmptyActionWord)
        );
        let w = Word::from_letters(&[3]).unwrap();
        assert!(matches!(derive(&dfa, &[w]), Err(Error::LetterOutOfRange { letter: 3, k: 2 })));
    }

    #[test]
    fn derived_action_fidelity() {
        let dfa = build(SeriesName::B, 7).unwrap();
        let actions = [Word::parse("ba").unwrap(), Word::parse("abb").unwrap()];
        let derived = derive(&dfa, &actions).unwrap();
        for q in 0..7 {
            for (i, w) in actions.iter().enumerate() {
                assert_eq!(derived.step(q, i), dfa.apply(q, w).unwrap());
            }
        }
    }

    #[test]
    fn cycle_series_derives_to_the_w_series() {
        for n in 4..=7 {
            let c = build(SeriesName::C, n).unwrap();
            let derived = derive(&c, &[Word::parse("b").unwrap(), Word::parse("ab").unwrap()]).unwrap();
            let w = build(SeriesName::W, n).unwrap();
            assert_eq!(
                iso_canonical_form(&derived).unwrap(),
                iso_canonical_form(&w).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn e_series_restricts_to_the_cycle_series_one_state_down() {
        // All states except the transient state 1 are closed under b and aa;
        // the restriction is the extremal cycle automaton one state smaller.
        for n in 5..=7 {
            let e = build(SeriesName::E, n).unwrap();
            let derived = derive(&e, &[Word::parse("b").unwrap(), Word::parse("aa").unwrap()]).unwrap();
            let keep: Vec<usize> = (0..n).filter(|&q| q != 1).collect();
            let sub = derived.subautomaton(StateSet::from_states(n, &keep).unwrap()).unwrap();
            assert_eq!(
                iso_canonical_form(&sub).unwrap(),
                iso_canonical_form(&build(SeriesName::C, n - 1).unwrap()).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn idempotent_bound_on_the_cycle_series_is_tight() {
        for n in 4..=10 {
            let c = build(SeriesName::C, n).unwrap();
            let report = check_simple_idempotent_bound(&c).unwrap();
            assert!(report.applicable);
            assert_eq!(report.base_threshold, Some(claimed_threshold(SeriesName::C, n).unwrap()));
            assert_eq!(report.bound_holds, Some(true));
            // The derived threshold meets the bound with equality.
            assert_eq!(
                report.derived_threshold.unwrap(),
                report.base_threshold.unwrap() - n + 2,
                "n = {n}"
            );
        }
    }

    #[test]
    fn idempotent_bound_applies_to_f_but_not_w() {
        for n in [5, 7, 9] {
            let f = build(SeriesName::F, n).unwrap();
            let report = check_simple_idempotent_bound(&f).unwrap();
            assert!(report.applicable);
            assert_eq!(report.bound_holds, Some(true));
        }
        let w = build(SeriesName::W, 6).unwrap();
        let report = check_simple_idempotent_bound(&w).unwrap();
        assert!(!report.applicable);
        assert_eq!(report.bound_holds, None);

        let three = Dfa::from_table(2, 3, &[0, 1, 0, 1, 0, 1]).unwrap();
        assert!(matches!(
            check_simple_idempotent_bound(&three),
            Err(Error::WrongLetterCount { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn frobenius_values() {
        assert_eq!(frobenius(3, 5).unwrap(), 7);
        for n in 4u64..=12 {
            assert_eq!(frobenius(n, n - 1).unwrap(), n * n - 3 * n + 1);
            if n % 2 == 1 {
                assert_eq!(frobenius(n, n - 2).unwrap(), n * n - 4 * n + 2);
            }
        }
        assert_eq!(frobenius(4, 6), Err(Error::NotCoprime { a: 4, b: 6 }));
        assert_eq!(frobenius(1, 5), Err(Error::GeneratorTooSmall(1)));
        assert_eq!(frobenius(5, 0), Err(Error::GeneratorTooSmall(0)));
    }

    #[test]
    fn representability() {
        assert!(!representable(7, 3, 5));
        assert!(representable(8, 3, 5));
        assert!(representable(0, 3, 5));
        assert!(representable(9, 3, 5));
        // Everything just above the Frobenius number is representable.
        let f = frobenius(4, 9).unwrap();
        assert!(!representable(f, 4, 9));
        for x in f + 1..=f + 13 {
            assert!(representable(x, 4, 9), "x = {x}");
        }
    }

    #[test]
    fn lower_bound_chain_reproduces_the_extremal_threshold() {
        // rt(C_n) = rt(derived) + (n - 2) = (n - 1)^2.
        for n in 4..=10 {
            let c = build(SeriesName::C, n).unwrap();
            let derived = derive(&c, &[Word::parse("b").unwrap(), Word::parse("ab").unwrap()]).unwrap();
            let t = match reset_threshold(&c, None) {
                ResetResult::Reset { threshold, .. } => threshold,
                other => panic!("{other:?}"),
            };
            let s = match reset_threshold(&derived, None) {
                ResetResult::Reset { threshold, .. } => threshold,
                other => panic!("{other:?}"),
            };
            assert_eq!(t, s + n - 2);
            assert_eq!(t, (n - 1) * (n - 1));
        }
    }
}
