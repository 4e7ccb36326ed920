use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsl_automata::duality::dual_derivative;
use crate::jsl_automata::{irreducible_nfa, minimal_jsl};
use crate::lang_core::{LanguageHandle, Nfa, Symbol};
use crate::monoids::{syntactic_monoid, MONOID_BUDGET};

use super::dependency::dependency;
use super::matrix::unitriangularizable;

/// The nfa of join-irreducibles of the minimal semilattice automaton: one state per
/// ∪-irreducible derivative, accepting that derivative.
pub fn canonical_residual(l: &LanguageHandle) -> Result<Nfa> {
    Ok(irreducible_nfa(&minimal_jsl(l)?))
}

/// `map` is a bijection carrying transitions, initial and final states exactly.
pub fn is_nfa_isomorphism(a: &Nfa, b: &Nfa, map: &[u32]) -> bool {
    let n = a.n_states();
    if b.n_states() != n || map.len() != n || a.n_symbols() != b.n_symbols() {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in map {
        if y as usize >= n || std::mem::replace(&mut seen[y as usize], true) {
            return false;
        }
    }
    let image = |xs: &[u32]| {
        let mut v: Vec<u32> = xs.iter().map(|&x| map[x as usize]).collect();
        v.sort_unstable();
        v
    };
    image(a.initial()) == b.initial()
        && image(a.finals()) == b.finals()
        && (0..n as u32).all(|q| {
            (0..a.n_symbols() as Symbol).all(|s| image(a.successors(q, s)) == b.successors(map[q as usize], s))
        })
}

/// For topological `L`: the map from the canonical residual automaton of `L` to the reverse
/// of that of `rev L` sending `j` to the irreducible `K` whose dual derivative is the union
/// of the quotients not containing `j`. `None` if some `j` has no such `K`.
pub fn theta(l: &LanguageHandle) -> Result<Option<Vec<u32>>> {
    let q = minimal_jsl(l)?;
    let qr = minimal_jsl(&l.reverse())?;
    let s = q.semilattice();
    let irr_rev = qr.semilattice().join_irreducibles();
    let duals: Vec<LanguageHandle> = irr_rev
        .iter()
        .map(|&k| dual_derivative(l, &qr.state_language(k)))
        .collect();
    let mut map = Vec::new();
    for &j in s.join_irreducibles() {
        let tau = s.join_all((0..s.len()).filter(|&x| !s.leq(j, x)));
        let target = q.state_language(tau);
        match duals.iter().position(|d| *d == target) {
            Some(k) => map.push(k as u32),
            None => return Ok(None),
        }
    }
    Ok(Some(map))
}

/// Language classes, each from its defining test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Nonempty left derivatives are pairwise disjoint.
    pub bideterministic: bool,
    /// The quotient semilattice is a boolean algebra.
    pub biseparable: bool,
    /// The quotient semilattice is distributive.
    pub topological: bool,
    /// The canonical residual automaton is isomorphic to the reverse of that of `rev L`.
    pub birfsa: bool,
    /// The quotient lattice has length equal to its number of join-irreducibles.
    pub extremal: bool,
    /// Length, join-irreducibles and meet-irreducibles all have the same count; the
    /// languages whose reduced dependency relation is square and unitriangularizable.
    pub extremal_markowsky: bool,
    /// The reduced dependency relation is upper unitriangularizable.
    pub unitriangular: bool,
    /// Unary with a minimal dfa that is a single cycle; `None` for larger alphabets.
    pub cyclic_unary: Option<bool>,
    pub cyclic_syntactic_group: bool,
    /// On topological languages, whether the dual map is an isomorphism of residual automata.
    pub theta_isomorphism: Option<bool>,
}

/// Computes every class and enforces the implications between them; a violated
/// implication is a [`Error::Check`].
pub fn classify(l: &LanguageHandle) -> Result<Classification> {
    let q = minimal_jsl(l)?;
    let pred = q.semilattice().predicates();
    let extremal_markowsky = pred.is_extremal && q.semilattice().meet_irreducibles().len() == pred.length;
    let ders: Vec<LanguageHandle> = l.derivative_set().into_iter().filter(|d| !d.is_empty()).collect();
    let bideterministic = ders
        .iter()
        .enumerate()
        .all(|(i, x)| ders[i + 1..].iter().all(|y| x.is_disjoint(y)));
    let residual = canonical_residual(l)?;
    let rev_residual = canonical_residual(&l.reverse())?.reverse();
    let birfsa = residual.isomorphism(&rev_residual).is_some();
    let unitriangular = unitriangularizable(&dependency(l).reduced().matrix).is_some();
    let cyclic_unary = (l.n_symbols() == 1).then(|| {
        let d = l.dfa();
        let mut hit = vec![false; d.n_states()];
        (0..d.n_states() as u32).all(|s| !std::mem::replace(&mut hit[d.next(s, 0) as usize], true))
    });
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    let theta_isomorphism = if pred.is_distributive {
        Some(theta(l)?.is_some_and(|m| is_nfa_isomorphism(&residual, &rev_residual, &m)))
    } else {
        None
    };
    let c = Classification {
        bideterministic,
        biseparable: pred.is_boolean,
        topological: pred.is_distributive,
        birfsa,
        extremal: pred.is_extremal,
        extremal_markowsky,
        unitriangular,
        cyclic_unary,
        cyclic_syntactic_group: syn.is_cyclic_group(),
        theta_isomorphism,
    };
    let implications = [
        (c.bideterministic, c.biseparable, "bideterministic but not biseparable"),
        (c.biseparable, c.topological, "biseparable but not topological"),
        (c.topological, c.extremal_markowsky, "topological but not extremal"),
        (
            c.extremal_markowsky,
            c.extremal,
            "length equals both irreducible counts but not extremal",
        ),
        (c.topological, c.birfsa, "topological but not biRFSA"),
        (c.birfsa, c.topological, "biRFSA but not topological"),
        (
            c.extremal_markowsky,
            c.unitriangular,
            "extremal but the reduced relation is not unitriangularizable",
        ),
        (
            c.unitriangular,
            c.extremal_markowsky,
            "unitriangularizable reduced relation but not extremal",
        ),
        (
            c.topological,
            c.theta_isomorphism == Some(true),
            "dual map is not an isomorphism",
        ),
    ];
    for (premise, conclusion, what) in implications {
        if premise && !conclusion {
            return Err(Error::Check(what.into()));
        }
    }
    Ok(c)
}

/// `|LD(L)| = 2^|N|` for an acceptor `N` of `L`, which makes `N` state-minimal.
pub fn is_maximal_reachability_witness(n: &Nfa) -> bool {
    n.n_states() < usize::BITS as usize - 1 && n.language().n_states() == 1 << n.n_states()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::is_atomic;
    use crate::lang_core::{parse_regex, Alphabet};

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    #[test]
    fn residual_of_two_words() {
        let l = lang("a+aa", &["a"]);
        let n = canonical_residual(&l).unwrap();
        assert_eq!(n.n_states(), 3);
        assert_eq!(n.language(), l);
        assert!(is_atomic(&n));
    }

    #[test]
    fn single_word_is_bideterministic() {
        let c = classify(&lang("ab", &["a", "b"])).unwrap();
        assert!(c.bideterministic && c.biseparable && c.topological && c.birfsa && c.extremal);
        assert_eq!(c.theta_isomorphism, Some(true));
        assert_eq!(c.cyclic_unary, None);
    }

    #[test]
    fn diamond_example_is_not_topological() {
        let l = lang("a1(a2+a3)+a2(a1+a3)+a3(a1+a2)", &["a1", "a2", "a3"]);
        let c = classify(&l).unwrap();
        assert!(!c.topological && !c.birfsa && !c.biseparable);
        assert_eq!(c.extremal_markowsky, c.unitriangular);
    }

    /// Length 4 with 4 join-irreducibles but 5 meet-irreducibles: extremal by the length
    /// count alone, yet the reduced relation is 4 × 5 and cannot be unitriangular.
    #[test]
    fn length_count_alone_does_not_give_unitriangular() {
        let d = crate::lang_core::Dfa::from_parts(
            2,
            vec![1, 0, 2, 3, 4, 2, 1, 5, 4, 4, 6, 3, 2, 7, 1, 8, 6, 7],
            0,
            vec![false, false, true, true, false, false, true, true, true],
        );
        let c = classify(&LanguageHandle::from_dfa(&d)).unwrap();
        assert!(c.extremal && !c.extremal_markowsky && !c.unitriangular);
    }

    #[test]
    fn unary_cycles() {
        let c = classify(&lang("a(aaa)*+aa(aaa)*", &["a"])).unwrap();
        assert_eq!(c.cyclic_unary, Some(true));
        assert!(c.cyclic_syntactic_group);
        let c = classify(&lang("a+aa", &["a"])).unwrap();
        assert_eq!(c.cyclic_unary, Some(false));
        assert!(!c.cyclic_syntactic_group);
    }

    #[test]
    fn maximal_reachability() {
        // a swaps the two states, b sends 0 to both and kills 1: all four subsets are
        // reachable and distinguishable
        let mut n = Nfa::new(2, 2);
        n.add_transition(0, 0, 1);
        n.add_transition(1, 0, 0);
        n.add_transition(0, 1, 0);
        n.add_transition(0, 1, 1);
        n.set_initial([0]);
        n.set_final([1]);
        assert!(is_maximal_reachability_witness(&n));
        assert!(!is_maximal_reachability_witness(
            &canonical_residual(&lang("(a+b)*a(a+b)", &["a", "b"])).unwrap()
        ));
    }
}
