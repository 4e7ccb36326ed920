use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsl_automata::AtomSpace;
use crate::lang_core::{LanguageHandle, Nfa};
use crate::monoids::{syntactic_monoid, MONOID_BUDGET};

use super::budget::SearchBudget;
use super::dependency::dependency;
use super::matrix::bipartite_dimension;
use super::residual::canonical_residual;
use super::sat::atom_acceptor;
use super::search::{cover_search, dfa_included, Coords, FamilyProblem, ListProblem};

/// Bounds on a minimum state count, with a witness of size `upper` when one is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    #[serde(skip)]
    pub witness: Option<Nfa>,
    /// How each bound was obtained.
    pub method: Vec<String>,
}

impl Bounds {
    fn zero(l: &LanguageHandle) -> Self {
        Bounds {
            lower: 0,
            upper: 0,
            exact: true,
            witness: Some(Nfa::new(l.n_symbols(), 0)),
            method: vec!["empty language: the 0-state nfa".into()],
        }
    }

    fn settle(&mut self, k: usize, witness: Nfa, how: String) {
        self.lower = k;
        self.upper = k;
        self.exact = true;
        self.witness = Some(witness);
        self.method.push(how);
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

/// `max(dim, ⌈log₂|LD(L)|⌉)` and the canonical residual automaton as upper witness.
fn initial_bounds(l: &LanguageHandle, budget: &SearchBudget) -> Result<Bounds> {
    let dim = bipartite_dimension(&dependency(l).matrix, budget)?;
    let log = ceil_log2(l.n_states());
    let residual = canonical_residual(l)?;
    let mut method = vec![
        format!("lower ≥ {}: bipartite dimension of the dependency relation", dim.lower),
        format!("lower ≥ {log}: ⌈log₂ {}⌉ derivatives", l.n_states()),
        format!("upper ≤ {}: canonical residual automaton", residual.n_states()),
    ];
    if !dim.exact {
        method.push("bipartite dimension inexact (budget)".into());
    }
    let lower = dim.lower.max(log).min(residual.n_states());
    Ok(Bounds {
        lower,
        upper: residual.n_states(),
        exact: lower == residual.n_states(),
        witness: Some(residual),
        method,
    })
}

/// Nondeterministic state complexity.
///
/// For a trim `k`-state acceptor, let `C_q` be the intersection of the derivatives `u⁻¹L`
/// over the words `u` reaching `q`. Every derivative is the union of the `C_q` below it, and
/// the nfa on the `C_q` with every transition `q →a q'` such that `C_q' ⊆ a⁻¹C_q` accepts
/// `L`. So it suffices to search families of at most `k` intersections of derivatives
/// that cover every derivative and whose maximal nfa accepts `L`.
pub fn ns_search(l: &LanguageHandle, budget: &SearchBudget) -> Result<Bounds> {
    if l.is_empty() {
        return Ok(Bounds::zero(l));
    }
    let mut b = initial_bounds(l, budget)?;
    if b.exact {
        return Ok(b);
    }
    let coords = match Coords::left(l) {
        Ok(c) => c,
        Err(e) if e.is_budget() => {
            b.method.push("search skipped: more than 64 atoms".into());
            return Ok(b);
        }
        Err(e) => return Err(e),
    };
    let mut targets: Vec<u64> = coords.derivatives.iter().copied().filter(|&d| d != 0).collect();
    targets.sort_unstable();
    targets.dedup();
    let pool = match super::search::intersection_closure(&targets, 1 << 16) {
        Ok(p) => p,
        Err(e) if e.is_budget() => {
            b.method.push("search skipped: intersection closure over budget".into());
            return Ok(b);
        }
        Err(e) => return Err(e),
    };
    let dfa = l.dfa();
    let p = ListProblem {
        targets,
        pool: &pool,
        accept: |fam: &[u64]| dfa_included(dfa, &coords.maximal_nfa(fam)),
        extend: true,
    };
    let mut meter = budget.meter();
    for k in b.lower..b.upper.min(budget.max_states + 1) {
        match cover_search(&p, k, &mut meter) {
            Ok(Some(fam)) => {
                let n = coords.maximal_nfa(&fam);
                if n.language() != *l {
                    return Err(Error::Check("row-family witness does not accept the language".into()));
                }
                b.settle(
                    k,
                    n,
                    format!("exact: witness with {k} states from the derivative-intersection search"),
                );
                return Ok(b);
            }
            Ok(None) => {
                b.lower = k + 1;
                b.method.push(format!(
                    "lower ≥ {}: no {k}-state acceptor (derivative-intersection search)",
                    k + 1
                ));
            }
            Err(e) if e.is_budget() => {
                b.method.push(format!("search stopped at k = {k}: {e}"));
                return Ok(b);
            }
            Err(e) => return Err(e),
        }
    }
    b.exact = b.lower == b.upper;
    Ok(b)
}

/// Minimum acceptor whose state languages are unions of atoms of `sp`, from `lower` up.
/// Each size is decided by the SAT encoding; when the atoms fit in masks, the family
/// search decides it independently and must agree.
fn atom_search(l: &LanguageHandle, sp: &AtomSpace, mut b: Bounds, budget: &SearchBudget, what: &str) -> Result<Bounds> {
    let coords = Coords::from_atoms(sp).ok();
    let mut unconfirmed = Vec::new();
    for k in b.lower..b.upper.min(budget.max_states + 1) {
        let by_sat = atom_acceptor(sp, k)?;
        if let Some(c) = &coords {
            match cover_search(&FamilyProblem::new(c), k, &mut budget.meter()) {
                Ok(found) if found.is_some() != by_sat.is_some() => {
                    return Err(Error::Check(format!("{what} searches disagree at {k} states")));
                }
                Ok(_) => {}
                Err(e) if e.is_budget() => unconfirmed.push(k),
                Err(e) => return Err(e),
            }
        } else {
            unconfirmed.push(k);
        }
        match by_sat {
            Some(n) => {
                if n.language() != *l {
                    return Err(Error::Check(format!("{what} witness does not accept the language")));
                }
                b.settle(k, n, format!("exact: {k}-state {what} witness (sat)"));
                break;
            }
            None => {
                b.lower = k + 1;
                b.method
                    .push(format!("lower ≥ {}: no {k}-state {what} acceptor (sat)", k + 1));
            }
        }
    }
    b.exact = b.lower == b.upper;
    if !unconfirmed.is_empty() {
        b.method.push(format!(
            "family search over budget at k = {unconfirmed:?}; sat result unconfirmed"
        ));
    }
    Ok(b)
}

/// Nondeterministic syntactic complexity: fewest states of an acceptor whose state
/// languages are unions of syntactic classes.
pub fn nsyn_search(l: &LanguageHandle, budget: &SearchBudget) -> Result<Bounds> {
    if l.is_empty() {
        return Ok(Bounds::zero(l));
    }
    let b = initial_bounds(l, budget)?;
    if b.exact {
        return Ok(b);
    }
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    atom_search(l, &AtomSpace::syntactic(l, &syn), b, budget, "subatomic")
}

/// Fewest states of an acceptor whose state languages are unions of atoms of `L`.
pub fn natomic_search(l: &LanguageHandle, budget: &SearchBudget) -> Result<Bounds> {
    if l.is_empty() {
        return Ok(Bounds::zero(l));
    }
    let b = initial_bounds(l, budget)?;
    if b.exact {
        return Ok(b);
    }
    atom_search(l, &AtomSpace::left(l), b, budget, "atomic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{is_atomic, is_subatomic};
    use crate::lang_core::{parse_regex, Alphabet, Symbol};

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    #[test]
    fn trivial_languages() {
        let b = SearchBudget::default();
        assert_eq!(ns_search(&LanguageHandle::empty(2), &b).unwrap().upper, 0);
        let eps = ns_search(&LanguageHandle::epsilon(2), &b).unwrap();
        assert!(eps.exact && eps.upper == 1);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(
            (1..=9).map(ceil_log2).collect::<Vec<_>>(),
            vec![0, 1, 2, 2, 3, 3, 3, 3, 4]
        );
    }

    #[test]
    fn shift_language_needs_n_plus_two() {
        let b = SearchBudget::default();
        for n in 0..3 {
            let l = lang(&format!("(a+b)*a{}", "(a+b)".repeat(n)), &["a", "b"]);
            let ns = ns_search(&l, &b).unwrap();
            assert!(ns.exact);
            assert_eq!(ns.upper, n + 2);
            assert_eq!(ns.witness.unwrap().language(), l);
        }
    }

    /// `{a^n : n ≠ 5}`: five states suffice, but every subatomic acceptor needs six.
    #[test]
    fn unary_separation() {
        let l = lang("@+a+aa+aaa+aaaa+aaaaaa(a)*", &["a"]);
        let b = SearchBudget::default();
        let ns = ns_search(&l, &b).unwrap();
        assert!(ns.exact && ns.upper == 5, "{ns:?}");
        let nsyn = nsyn_search(&l, &b).unwrap();
        assert!(nsyn.exact && nsyn.upper == 6, "{nsyn:?}");
        assert!(is_subatomic(nsyn.witness.as_ref().unwrap()).unwrap());
        assert!(!is_subatomic(ns.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn witnesses_have_the_searched_kind() {
        let b = SearchBudget::default();
        for re in ["(a+b)*a(a+b)", "a(b+ab)*", "(ab)*+b", "a*b*a"] {
            let l = lang(re, &["a", "b"]);
            let ns = ns_search(&l, &b).unwrap();
            let nsyn = nsyn_search(&l, &b).unwrap();
            let nat = natomic_search(&l, &b).unwrap();
            assert!(ns.exact && nsyn.exact && nat.exact);
            assert!(ns.upper <= nsyn.upper && nsyn.upper <= nat.upper);
            assert!(is_subatomic(nsyn.witness.as_ref().unwrap()).unwrap());
            assert!(is_atomic(nat.witness.as_ref().unwrap()));
        }
    }

    /// Exhaustive oracle over all nfas with at most two states on two letters.
    #[test]
    fn ns_matches_enumeration_of_small_nfas() {
        let mut smallest: std::collections::HashMap<LanguageHandle, usize> = Default::default();
        for n in 0..=2usize {
            let pairs = n * 2 * n;
            for edges in 0u32..1 << pairs {
                for ends in 0u32..1 << (2 * n) {
                    let mut a = Nfa::new(2, n);
                    for e in 0..pairs {
                        if edges >> e & 1 == 1 {
                            a.add_transition((e / (2 * n)) as u32, (e / n % 2) as Symbol, (e % n) as u32);
                        }
                    }
                    a.set_initial((0..n as u32).filter(|&q| ends >> q & 1 == 1));
                    a.set_final((0..n as u32).filter(|&q| ends >> (n as u32 + q) & 1 == 1));
                    smallest.entry(a.language()).or_insert(n);
                }
            }
        }
        let b = SearchBudget::default();
        for (l, n) in smallest {
            let ns = ns_search(&l, &b).unwrap();
            assert!(ns.exact);
            assert_eq!(ns.upper, n, "{:?}", l.dfa());
        }
    }
}
