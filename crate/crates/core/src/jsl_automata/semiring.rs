use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lang_core::Symbol;
use crate::monoids::{transition_monoid, FiniteMonoid, MONOID_BUDGET};
use crate::semilattice::{FiniteSemilattice, MAX_ELEMENTS};

use super::atoms::AtomSpace;
use super::constructions::sub_automaton;
use super::JslDfa;

/// Default element budget for transition semirings.
pub const SEMIRING_BUDGET: usize = 1 << 12;

/// Finite joins of the maps `δ_w`, as an automaton with `f →a δ_a ∘ f`.
///
/// An element is stored by its images of the join-irreducibles of the base semilattice.
#[derive(Clone, Debug)]
pub struct TransitionSemiring {
    base: JslDfa,
    irreducibles: Vec<usize>,
    tables: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    auto: JslDfa,
}

impl TransitionSemiring {
    pub fn automaton(&self) -> &JslDfa {
        &self.auto
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Value of element `e` on base element `x`.
    pub fn apply(&self, e: usize, x: usize) -> usize {
        let s = self.base.semilattice();
        s.join_all(
            self.irreducibles
                .iter()
                .zip(&self.tables[e])
                .filter(|(&j, _)| s.leq(j, x))
                .map(|(_, &y)| y as usize),
        )
    }

    /// `e • f = f ∘ e`, so that `δ_v • δ_w = δ_{vw}`.
    pub fn product(&self, e: usize, f: usize) -> usize {
        let t: Vec<u32> = self.tables[e]
            .iter()
            .map(|&y| self.apply(f, y as usize) as u32)
            .collect();
        self.index[&t] as usize
    }

    /// The element `δ_w`.
    pub fn word(&self, w: &[Symbol]) -> usize {
        self.auto.run_from(self.auto.init(), w)
    }

    pub fn identity(&self) -> usize {
        self.auto.init()
    }
}

/// The maps `δ_w` and all their finite joins, each stored by its images of the
/// join-irreducibles of `a`, without the order between them.
pub(crate) struct SemiringTables {
    pub irreducibles: Vec<usize>,
    /// Distinct `δ_w`; the first is the identity.
    pub words: Vec<Vec<u32>>,
    /// Joins of `words`; the first is the bottom.
    pub tables: Vec<Vec<u32>>,
    pub index: HashMap<Vec<u32>, u32>,
}

pub(crate) fn after(a: &JslDfa, t: &[u32], c: Symbol) -> Vec<u32> {
    t.iter().map(|&y| a.step(y as usize, c) as u32).collect()
}

pub(crate) fn semiring_tables(a: &JslDfa, budget: usize) -> Result<SemiringTables> {
    let s = a.semilattice();
    let irr = s.join_irreducibles().to_vec();
    let too_big = || Error::budget("transition semiring elements", budget as u64);

    let id: Vec<u32> = irr.iter().map(|&j| j as u32).collect();
    let mut words = vec![id.clone()];
    let mut seen = HashMap::from([(id, ())]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for c in 0..a.n_symbols() as Symbol {
            let t = after(a, &words[i], c);
            if seen.insert(t.clone(), ()).is_none() {
                if words.len() >= budget {
                    return Err(too_big());
                }
                words.push(t);
                queue.push_back(words.len() - 1);
            }
        }
    }

    let bottom = vec![s.bottom() as u32; irr.len()];
    let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(bottom.clone(), 0)]);
    let mut tables = vec![bottom];
    let mut i = 0;
    while i < tables.len() {
        for g in &words {
            let t: Vec<u32> = tables[i]
                .iter()
                .zip(g)
                .map(|(&x, &y)| s.join(x as usize, y as usize) as u32)
                .collect();
            if !index.contains_key(&t) {
                if tables.len() >= budget {
                    return Err(too_big());
                }
                index.insert(t.clone(), tables.len() as u32);
                tables.push(t);
            }
        }
        i += 1;
    }
    Ok(SemiringTables {
        irreducibles: irr,
        words,
        tables,
        index,
    })
}

/// Transition semiring of `a` (recommended reachable).
pub fn transition_semiring(a: &JslDfa, budget: usize) -> Result<TransitionSemiring> {
    let budget = budget.min(MAX_ELEMENTS);
    let s = a.semilattice();
    let SemiringTables {
        irreducibles: irr,
        tables,
        index,
        ..
    } = semiring_tables(a, budget)?;
    let after = |t: &[u32], c: Symbol| after(a, t, c);
    let m = tables.len();
    let order = FiniteSemilattice::from_leq(m, |e, f| {
        tables[e]
            .iter()
            .zip(&tables[f])
            .all(|(&x, &y)| s.leq(x as usize, y as usize))
    })?;
    let order = Arc::new(order);
    let trans = (0..a.n_symbols() as Symbol)
        .map(|c| tables.iter().map(|t| index[&after(t, c)]).collect())
        .collect();
    let init = index[&irr.iter().map(|&j| j as u32).collect::<Vec<_>>()] as usize;
    let image_of_init = |t: &[u32]| {
        s.join_all(
            irr.iter()
                .zip(t)
                .filter(|(&j, _)| s.leq(j, a.init()))
                .map(|(_, &y)| y as usize),
        )
    };
    let cofinal = order.join_all((0..m).filter(|&e| !a.is_final(image_of_init(&tables[e]))));
    let auto = JslDfa::from_tables(order, trans, init, cofinal);
    Ok(TransitionSemiring {
        base: a.clone(),
        irreducibles: irr,
        tables,
        index,
        auto,
    })
}

/// Closure of the state languages of `a` under right derivatives and unions, with left
/// derivatives as transitions. Members are sets of classes of the transition monoid of `a`.
pub fn right_derivative_closure(a: &JslDfa) -> Result<(JslDfa, AtomSpace)> {
    let (family, atoms, _) = right_derivative_family(a, MAX_ELEMENTS)?;
    let start = atoms.language().clone();
    let closed = sub_automaton(&atoms, &family, &start)?;
    Ok((closed, atoms))
}

/// State languages of `a` closed under right derivatives, as sets of classes of the
/// transition monoid of `a`, which is returned with its atoms.
pub(crate) fn right_derivative_family(
    a: &JslDfa,
    budget: usize,
) -> Result<(Vec<FixedBitSet>, AtomSpace, FiniteMonoid)> {
    let d = a.to_dfa();
    let tm = transition_monoid(&d, MONOID_BUDGET)?;
    let atoms = AtomSpace::from_monoid(&d, &tm);
    let mut family: Vec<FixedBitSet> = Vec::new();
    let mut seen: HashMap<FixedBitSet, ()> = HashMap::new();
    for k in atoms.derivatives() {
        if seen.insert(k.clone(), ()).is_none() {
            family.push(k.clone());
        }
    }
    let mut i = 0;
    while i < family.len() {
        for c in 0..a.n_symbols() as Symbol {
            let r = atoms.right_derivative(&family[i], c).expect("monoid atoms");
            if seen.insert(r.clone(), ()).is_none() {
                if family.len() >= budget {
                    return Err(Error::budget("right-derivative closure", budget as u64));
                }
                family.push(r);
            }
        }
        i += 1;
    }
    Ok((family, atoms, tm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jsl_automata::{minimal_jsl, powerset, reachable_part};
    use crate::lang_core::{all_words, parse_regex, Alphabet, LanguageHandle, Nfa};
    use crate::monoids::canonical_representation;

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    #[test]
    fn one_state_automaton() {
        let q = minimal_jsl(&LanguageHandle::empty(1)).unwrap();
        let ts = transition_semiring(&q, SEMIRING_BUDGET).unwrap();
        assert!(ts.len() <= 2);
        let mut n = Nfa::new(1, 1);
        n.set_initial([0]);
        n.set_final([0]);
        n.add_transition(0, 0, 0);
        let p = powerset(&n).unwrap();
        let ts = transition_semiring(&p, SEMIRING_BUDGET).unwrap();
        assert_eq!(ts.len(), 2);
        assert!(ts.automaton().language().is_universal());
    }

    #[test]
    fn semiring_accepts_and_multiplies_words() {
        for re in ["a+aa", "(a+b)*a(a+b)", "a(b+ab)*", "(ab)*"] {
            let l = lang(re, &["a", "b"]);
            let q = minimal_jsl(&l).unwrap();
            let ts = transition_semiring(&q, SEMIRING_BUDGET).unwrap();
            assert_eq!(ts.automaton().language(), l);
            for v in all_words(2, 3) {
                for w in all_words(2, 2) {
                    let vw: Vec<Symbol> = v.iter().chain(&w).copied().collect();
                    assert_eq!(ts.product(ts.word(&v), ts.word(&w)), ts.word(&vw));
                    let x = q.init();
                    assert_eq!(ts.apply(ts.word(&vw), x), q.run_from(x, &vw));
                }
            }
        }
    }

    /// The word maps of the semiring of Q(L) are the canonical action of the syntactic monoid.
    #[test]
    fn semiring_of_minimal_realizes_canonical_action() {
        for re in ["a+aa", "(a+b)*a(a+b)", "a(b+ab)*"] {
            let l = lang(re, &["a", "b"]);
            let q = minimal_jsl(&l).unwrap();
            let ts = transition_semiring(&q, SEMIRING_BUDGET).unwrap();
            let rep = canonical_representation(&l).unwrap();
            let mut seen = std::collections::HashSet::new();
            for m in 0..rep.monoid().len() as u32 {
                let w = rep.monoid().witness(m).to_vec();
                let act = rep.action(m);
                let e = ts.word(&w);
                for x in 0..q.len() {
                    assert_eq!(ts.apply(e, x), act[x] as usize);
                }
                seen.insert(e);
            }
            assert_eq!(seen.len(), rep.monoid().len());
        }
    }

    #[test]
    fn right_closure_of_unary_minimal_is_itself() {
        let l = lang("a+aaa(aa)*", &["a"]);
        let q = minimal_jsl(&l).unwrap();
        let (c, _) = right_derivative_closure(&q).unwrap();
        assert_eq!(c.len(), q.len());
        let mut x: Vec<_> = c.state_languages().to_vec();
        let mut y: Vec<_> = q.state_languages().to_vec();
        x.sort();
        y.sort();
        assert_eq!(x, y);
    }

    /// Oracle: fixpoint over handles with explicit right derivatives and unions.
    #[test]
    fn right_closure_matches_handle_fixpoint() {
        for re in ["a+aa", "(a+b)*a(a+b)", "a(b+ab)*"] {
            let l = lang(re, &["a", "b"]);
            let (r, _) = reachable_part(&minimal_jsl(&l).unwrap());
            let mut fam: Vec<LanguageHandle> = r.state_languages().to_vec();
            fam.sort();
            fam.dedup();
            loop {
                let mut next = fam.clone();
                for x in &fam {
                    for c in 0..2 {
                        next.push(x.right_derivative(&[c]));
                    }
                    for y in &fam {
                        next.push(x.union(y));
                    }
                }
                next.sort();
                next.dedup();
                if next == fam {
                    break;
                }
                fam = next;
            }
            let (c, _) = right_derivative_closure(&r).unwrap();
            let mut got = c.state_languages().to_vec();
            got.sort();
            assert_eq!(got, fam);
        }
    }
}
