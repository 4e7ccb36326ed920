use crate::error::Result;
use crate::jsl_automata::AtomSpace;
use crate::lang_core::{LanguageHandle, Nfa};
use crate::monoids::{monoid_quotient_compare, syntactic_monoid, transition_monoid, QuotientRelation, MONOID_BUDGET};

use super::budget::SearchBudget;
use super::search::{cover_search, Coords, FamilyProblem};

/// Every state language is a union of atoms of the accepted language.
pub fn is_atomic_by_atoms(n: &Nfa) -> bool {
    let sp = AtomSpace::left(&n.language());
    n.state_languages().iter().all(|k| sp.locate(k).is_some())
}

/// Determinizing the reverse yields a minimal dfa.
pub fn is_atomic_by_reverse(n: &Nfa) -> bool {
    n.reverse().rsc().is_minimal()
}

/// Every state language is a union of syntactic classes of the accepted language.
pub fn is_subatomic_by_atoms(n: &Nfa) -> Result<bool> {
    let l = n.language();
    let sp = AtomSpace::syntactic(&l, &syntactic_monoid(&l, MONOID_BUDGET)?);
    Ok(n.state_languages().iter().all(|k| sp.locate(k).is_some()))
}

/// The transition monoid of the determinized reverse is the syntactic monoid of the reverse.
pub fn is_subatomic_by_reverse(n: &Nfa) -> Result<bool> {
    let rev = n.reverse();
    let tm = transition_monoid(&rev.rsc(), MONOID_BUDGET)?;
    let syn = syntactic_monoid(&rev.language(), MONOID_BUDGET)?;
    Ok(monoid_quotient_compare(&tm, &syn) == QuotientRelation::Iso)
}

/// Both atomicity tests; they must agree.
pub fn is_atomic(n: &Nfa) -> bool {
    let (a, b) = (is_atomic_by_atoms(n), is_atomic_by_reverse(n));
    debug_assert_eq!(a, b, "atomicity tests disagree");
    a
}

/// Both subatomicity tests; they must agree.
pub fn is_subatomic(n: &Nfa) -> Result<bool> {
    let (a, b) = (is_subatomic_by_atoms(n)?, is_subatomic_by_reverse(n)?);
    debug_assert_eq!(a, b, "subatomicity tests disagree");
    Ok(a)
}

/// Acceptor of `L` with at most `k` states whose state languages are unions of atoms of
/// `coords`, or `None` if there is none. The witness has every transition its states allow.
pub(crate) fn family_search(coords: &Coords, k: usize, budget: &SearchBudget) -> Result<Option<Nfa>> {
    let p = FamilyProblem::new(coords);
    let found = cover_search(&p, k, &mut budget.meter())?;
    Ok(found.map(|fam| coords.maximal_nfa(&fam)))
}

/// Atomic acceptor with at most `k` states.
pub fn atomic_search(l: &LanguageHandle, k: usize, budget: &SearchBudget) -> Result<Option<Nfa>> {
    family_search(&Coords::left(l)?, k, budget)
}

/// Subatomic acceptor with at most `k` states.
pub fn subatomic_search(l: &LanguageHandle, k: usize, budget: &SearchBudget) -> Result<Option<Nfa>> {
    family_search(&Coords::syntactic(l, &syntactic_monoid(l, MONOID_BUDGET)?)?, k, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::Symbol;
    use proptest::prelude::*;

    fn arb_nfa() -> impl Strategy<Value = Nfa> {
        (1usize..=4, 1usize..=2).prop_flat_map(|(n, k)| {
            let m = n as u32;
            (
                proptest::collection::vec((0..m, 0..k as Symbol, 0..m), 0..=2 * n * k),
                proptest::collection::vec(0..m, 0..=n),
                proptest::collection::vec(0..m, 0..=n),
            )
                .prop_map(move |(edges, init, fin)| {
                    let mut a = Nfa::new(k, n);
                    for (p, s, q) in edges {
                        a.add_transition(p, s, q);
                    }
                    a.set_initial(init);
                    a.set_final(fin);
                    a
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn atomic_routes_agree(n in arb_nfa()) {
            prop_assert_eq!(is_atomic_by_atoms(&n), is_atomic_by_reverse(&n));
        }

        #[test]
        fn subatomic_routes_agree(n in arb_nfa()) {
            prop_assert_eq!(is_subatomic_by_atoms(&n).unwrap(), is_subatomic_by_reverse(&n).unwrap());
        }

        #[test]
        fn atomic_implies_subatomic(n in arb_nfa()) {
            prop_assert!(!is_atomic(&n) || is_subatomic(&n).unwrap());
        }

        /// The sat encoding and the family search decide the same sizes.
        #[test]
        fn sat_and_family_search_agree(n in arb_nfa(), k in 1usize..=3) {
            let l = n.language();
            let budget = SearchBudget::default();
            let sp = AtomSpace::left(&l);
            let by_sat = super::super::sat::atom_acceptor(&sp, k).unwrap();
            let by_family = atomic_search(&l, k, &budget).unwrap();
            prop_assert_eq!(by_sat.is_some(), by_family.is_some());
            for w in by_sat.iter().chain(by_family.iter()) {
                prop_assert_eq!(w.language(), l.clone());
                prop_assert!(is_atomic(w));
            }
            let syn = syntactic_monoid(&l, MONOID_BUDGET).unwrap();
            let by_sat = super::super::sat::atom_acceptor(&AtomSpace::syntactic(&l, &syn), k).unwrap();
            // the family search may run out of budget on large monoids
            let by_family = match subatomic_search(&l, k, &budget) {
                Err(e) if e.is_budget() => by_sat.clone(),
                r => r.unwrap(),
            };
            prop_assert_eq!(by_sat.is_some(), by_family.is_some());
            for w in by_sat.iter().chain(by_family.iter()) {
                prop_assert_eq!(w.language(), l.clone());
                prop_assert!(is_subatomic(w).unwrap());
            }
        }
    }
}
