//! Seeded random automata and exhaustive small languages for the property suites.

use std::collections::HashSet;

use rand::Rng;

use crate::lang_core::{Dfa, LanguageHandle, Nfa, Symbol};

/// Nfa with up to `max_states` states; each transition is present with probability
/// `density`, each state initial or final with probability 0.4.
pub fn random_nfa(rng: &mut impl Rng, max_states: usize, n_symbols: usize, density: f64) -> Nfa {
    let n = rng.gen_range(1..=max_states);
    let mut nfa = Nfa::new(n_symbols, n);
    for s in 0..n as u32 {
        for a in 0..n_symbols as Symbol {
            for t in 0..n as u32 {
                if rng.gen_bool(density) {
                    nfa.add_transition(s, a, t);
                }
            }
        }
    }
    nfa.set_initial((0..n as u32).filter(|_| rng.gen_bool(0.4)));
    nfa.set_final((0..n as u32).filter(|_| rng.gen_bool(0.4)));
    nfa.normalized()
}

/// Language of a random nfa, resampled until it is nonempty.
pub fn random_language(rng: &mut impl Rng, max_states: usize, n_symbols: usize) -> LanguageHandle {
    loop {
        let l = random_nfa(rng, max_states, n_symbols, 0.3).language();
        if !l.is_empty() {
            return l;
        }
    }
}

/// A unary dfa that is a single cycle of length `period` with random finals, as a
/// language; never empty.
pub fn random_cyclic_unary(rng: &mut impl Rng, max_period: usize) -> LanguageHandle {
    loop {
        let p = rng.gen_range(1..=max_period);
        let trans = (0..p as u32).map(|q| (q + 1) % p as u32).collect();
        let finals: Vec<bool> = (0..p).map(|_| rng.gen_bool(0.5)).collect();
        let l = LanguageHandle::from_dfa(&Dfa::from_parts(1, trans, 0, finals));
        if !l.is_empty() {
            return l;
        }
    }
}

/// Every language whose minimal complete dfa has at most `max_states` states, each once,
/// in a fixed order.
pub fn small_dfa_languages(max_states: usize, n_symbols: usize) -> Vec<LanguageHandle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let cells = n * n_symbols;
        for code in 0..(n as u64).pow(cells as u32) {
            let mut c = code;
            let trans: Vec<u32> = (0..cells)
                .map(|_| {
                    let t = (c % n as u64) as u32;
                    c /= n as u64;
                    t
                })
                .collect();
            for f in 0u32..1 << n {
                let finals: Vec<bool> = (0..n).map(|q| f >> q & 1 == 1).collect();
                let l = LanguageHandle::from_dfa(&Dfa::from_parts(n_symbols, trans.clone(), 0, finals));
                if seen.insert(l.clone()) {
                    out.push(l);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_state_languages_are_empty_and_universal() {
        assert_eq!(small_dfa_languages(1, 2).len(), 2);
    }

    #[test]
    fn two_state_unary_languages() {
        // ∅, a*, and with two states: ε, a+, (aa)*, a(aa)*, and complements where distinct
        let ls = small_dfa_languages(2, 1);
        assert!(ls.iter().all(|l| l.n_states() <= 2));
        let mut sorted = ls.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), ls.len());
        assert_eq!(ls.len(), 6);
    }
}
