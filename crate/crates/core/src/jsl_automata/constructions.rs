use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lang_core::{LanguageHandle, Nfa, Symbol};
use crate::semilattice::{FiniteSemilattice, JslMorphism, MAX_ELEMENTS};

use super::atoms::AtomSpace;
use super::JslDfa;

/// Subset construction as a semilattice automaton; element index = subset bitmask.
pub fn powerset(n: &Nfa) -> Result<JslDfa> {
    let k = n.n_states();
    if k >= 63 || 1usize << k > MAX_ELEMENTS {
        return Err(Error::budget("powerset elements", MAX_ELEMENTS as u64));
    }
    let s = Arc::new(FiniteSemilattice::powerset(k)?);
    let mask = |states: &[u32]| states.iter().fold(0u32, |m, &q| m | 1 << q);
    let tables = (0..n.n_symbols() as Symbol)
        .map(|a| {
            let single: Vec<u32> = (0..k as u32).map(|q| mask(n.successors(q, a))).collect();
            (0..1u32 << k)
                .map(|x| (0..k).filter(|&q| x >> q & 1 == 1).fold(0, |m, q| m | single[q]))
                .collect()
        })
        .collect();
    let full = (1u32 << k) - 1;
    Ok(JslDfa::from_tables(
        s,
        tables,
        mask(n.initial()) as usize,
        (full & !mask(n.finals())) as usize,
    ))
}

/// `powerset(reverse(n))`, isomorphic to the dual of `powerset(n)` via complement.
pub fn dual_powerset(n: &Nfa) -> Result<JslDfa> {
    powerset(&n.reverse())
}

/// Nfa on the join-irreducibles: `j →a j'` iff `j' ≤ δ_a(j)`, initial iff `j ≤ init`, final iff `j` is final.
pub fn irreducible_nfa(a: &JslDfa) -> Nfa {
    let s = a.semilattice();
    let irr = s.join_irreducibles();
    let mut n = Nfa::new(a.n_symbols(), irr.len());
    for (i, &j) in irr.iter().enumerate() {
        for x in 0..a.n_symbols() as Symbol {
            let t = a.step(j, x);
            for (i2, &j2) in irr.iter().enumerate() {
                if s.leq(j2, t) {
                    n.add_transition(i as u32, x, i2 as u32);
                }
            }
        }
    }
    n.set_initial((0..irr.len() as u32).filter(|&i| s.leq(irr[i as usize], a.init())));
    n.set_final((0..irr.len() as u32).filter(|&i| a.is_final(irr[i as usize])));
    n.normalized()
}

/// The union closure of the left derivatives with `K ↦ a⁻¹K`; labels are atom sets of [`AtomSpace::left`].
pub fn minimal_jsl(l: &LanguageHandle) -> Result<JslDfa> {
    minimal_jsl_with_atoms(l).map(|(q, _)| q)
}

pub fn minimal_jsl_with_atoms(l: &LanguageHandle) -> Result<(JslDfa, AtomSpace)> {
    let atoms = AtomSpace::left(l);
    let q = sub_automaton(&atoms, atoms.derivatives(), atoms.language())?;
    Ok((q, atoms))
}

/// The union closure of `generators` inside the algebra of `atoms`, which must be closed
/// under left derivatives; transitions `K ↦ a⁻¹K`, init `start`, finals `ε ∈ K`.
pub fn sub_automaton(atoms: &AtomSpace, generators: &[FixedBitSet], start: &FixedBitSet) -> Result<JslDfa> {
    let s = Arc::new(FiniteSemilattice::from_union_closure(
        atoms.n_atoms(),
        generators,
        MAX_ELEMENTS,
    )?);
    let labels: Vec<FixedBitSet> = (0..s.len()).map(|x| s.label(x).expect("labelled").clone()).collect();
    let index: HashMap<&FixedBitSet, usize> = labels.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let lookup = |k: &FixedBitSet| {
        index
            .get(k)
            .copied()
            .ok_or_else(|| Error::Precondition("family not closed under left derivatives".into()))
    };
    let mut tables = Vec::with_capacity(atoms.n_symbols());
    for a in 0..atoms.n_symbols() as Symbol {
        tables.push(
            labels
                .iter()
                .map(|k| lookup(&atoms.derivative(k, a)).map(|x| x as u32))
                .collect::<Result<Vec<u32>>>()?,
        );
    }
    let init = lookup(start)?;
    let cofinal = s.join_all((0..s.len()).filter(|&x| !atoms.contains_epsilon(&labels[x])));
    Ok(JslDfa::from_tables(s, tables, init, cofinal))
}

/// Sub-automaton of joins of dfa-reachable elements, with its embedding.
pub fn reachable_part(a: &JslDfa) -> (JslDfa, JslMorphism) {
    let member = a.jsl_reachable();
    let keep: Vec<usize> = (0..a.len()).filter(|&x| member[x]).collect();
    let mut local = vec![u32::MAX; a.len()];
    for (i, &x) in keep.iter().enumerate() {
        local[x] = i as u32;
    }
    let s = a.semilattice();
    let m = keep.len();
    let up = keep
        .iter()
        .map(|&x| crate::bits::bitset(m, (0..m).filter(|&i| s.leq(x, keep[i]))))
        .collect();
    let sub = Arc::new(FiniteSemilattice::from_up_sets(up).expect("joins of a sub-semilattice"));
    let tables = (0..a.n_symbols() as Symbol)
        .map(|c| keep.iter().map(|&x| local[a.step(x, c)]).collect())
        .collect();
    let cofinal = s.join_all(keep.iter().copied().filter(|&x| !a.is_final(x)));
    let r = JslDfa::from_tables(sub.clone(), tables, local[a.init()] as usize, local[cofinal] as usize);
    let emb = JslMorphism::new_unchecked(sub, s.clone(), keep.iter().map(|&x| x as u32).collect());
    (r, emb)
}

/// Quotient identifying elements with equal languages, with the quotient map.
pub fn simplification(a: &JslDfa) -> (JslDfa, JslMorphism) {
    let class = a.language_classes();
    let m = class.iter().max().map_or(0, |&c| c as usize + 1);
    let mut rep = vec![usize::MAX; m];
    for (x, &c) in class.iter().enumerate() {
        if rep[c as usize] == usize::MAX {
            rep[c as usize] = x;
        }
    }
    let s = a.semilattice();
    // L(x) ⊆ L(y) iff L(x ∨ y) = L(y)
    let q = Arc::new(
        FiniteSemilattice::from_leq(m, |c, d| class[s.join(rep[c], rep[d])] as usize == d)
            .expect("quotient of a semilattice automaton"),
    );
    let tables = (0..a.n_symbols() as Symbol)
        .map(|x| rep.iter().map(|&r| class[a.step(r, x)]).collect())
        .collect();
    let simple = JslDfa::from_tables(q.clone(), tables, class[a.init()] as usize, class[a.cofinal()] as usize);
    let quotient = JslMorphism::new_unchecked(s.clone(), q, class);
    (simple, quotient)
}

/// Reversed order, adjoint transitions, initial and cofinal swapped; accepts the reverse language.
pub fn dual_auto(a: &JslDfa) -> JslDfa {
    let d = Arc::new(a.semilattice().dual());
    let delta = a
        .deltas()
        .iter()
        .map(|f| f.adjoint_between(d.clone(), d.clone()))
        .collect();
    JslDfa::new_unchecked(d, delta, a.cofinal(), a.init())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jsl_automata::{is_automaton_isomorphism, is_automaton_morphism, simple_isomorphism};
    use crate::lang_core::{all_words, parse_regex, Alphabet};
    use crate::semilattice::iso_search;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_nfa(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> Nfa {
        let n = rng.gen_range(0..=max_states);
        let mut nfa = Nfa::new(k, n);
        for s in 0..n as u32 {
            for a in 0..k as Symbol {
                for t in 0..n as u32 {
                    if rng.gen_bool(0.3) {
                        nfa.add_transition(s, a, t);
                    }
                }
            }
        }
        nfa.set_initial((0..n as u32).filter(|_| rng.gen_bool(0.4)));
        nfa.set_final((0..n as u32).filter(|_| rng.gen_bool(0.4)));
        nfa.normalized()
    }

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    #[test]
    fn powerset_small_cases() {
        let p = powerset(&Nfa::new(1, 0)).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.language().is_empty());
        let mut n = Nfa::new(1, 1);
        n.add_transition(0, 0, 0);
        n.set_initial([0]);
        n.set_final([0]);
        let p = powerset(&n).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.language().is_universal());
        assert_eq!(irreducible_nfa(&p).n_states(), 1);
    }

    #[test]
    fn powerset_accepts_and_irreducibles_recover_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = random_nfa(&mut rng, 5, 2);
            let p = powerset(&n).unwrap();
            assert_eq!(p.language(), n.language());
            let j = irreducible_nfa(&p);
            assert_eq!(j.n_states(), n.n_states());
            assert_eq!(j.language(), n.language());
            for x in 0..p.len() {
                let states: Vec<u32> = (0..n.n_states() as u32).filter(|&q| x >> q & 1 == 1).collect();
                assert_eq!(p.state_language(x), n.with_initial(states).language());
            }
        }
    }

    #[test]
    fn minimal_jsl_of_two_words() {
        let l = lang("a+aa", &["a"]);
        let q = minimal_jsl(&l).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(q.language(), l);
        assert_eq!(q.semilattice().join_irreducibles().len(), 3);
        let nfa = irreducible_nfa(&q);
        assert_eq!(nfa.n_states(), 3);
        for w in all_words(1, 3) {
            assert_eq!(nfa.accepts(&w), l.contains(&w));
        }
        let langs: std::collections::HashSet<_> = q.state_languages().iter().cloned().collect();
        let a_inv = l.left_derivative(&[0]);
        assert!(langs.contains(&a_inv.union(&l)));
        assert!(langs.contains(&LanguageHandle::empty(1)));
        assert!(q.is_simple() && q.is_reachable());
    }

    /// Oracle: union closure computed directly on language handles.
    #[test]
    fn minimal_jsl_labels_are_union_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let n = random_nfa(&mut rng, 3, 2);
            let l = n.language();
            let q = minimal_jsl(&l).unwrap();
            let ders = l.derivative_set();
            let mut closure = vec![LanguageHandle::empty(2)];
            let mut i = 0;
            while i < closure.len() {
                for d in &ders {
                    let u = closure[i].union(d);
                    if !closure.contains(&u) {
                        closure.push(u);
                    }
                }
                i += 1;
            }
            let mut got: Vec<_> = q.state_languages().to_vec();
            got.sort();
            closure.sort();
            assert_eq!(got, closure);
            for x in 0..q.len() {
                let k = q.state_language(x);
                for a in 0..2 {
                    assert_eq!(q.state_language(q.step(x, a)), k.left_derivative(&[a]));
                }
                assert_eq!(q.is_final(x), k.contains_epsilon());
            }
        }
    }

    #[test]
    fn reachable_and_simplification_are_idempotent_and_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let n = random_nfa(&mut rng, 4, 2);
            let p = powerset(&n).unwrap();
            let (r, emb) = reachable_part(&p);
            assert!(is_automaton_morphism(&emb, &r, &p));
            assert!(r.is_reachable());
            assert_eq!(reachable_part(&r).0.len(), r.len());
            let (s, quo) = simplification(&p);
            assert!(is_automaton_morphism(&quo, &p, &s));
            assert!(s.is_simple());
            assert_eq!(simplification(&s).0.len(), s.len());
            let sr = simplification(&r).0;
            let rs = reachable_part(&s).0;
            assert!(simple_isomorphism(&sr, &rs).is_some());
            let found = iso_search(sr.semilattice(), rs.semilattice(), 1_000_000).unwrap();
            assert!(found.is_some());
            assert_eq!(r.language(), n.language());
            assert_eq!(s.language(), n.language());
        }
    }

    /// Reachable part oracle: fixpoint of joins and transitions from the initial element.
    #[test]
    fn reachable_part_matches_fixpoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..40 {
            let n = random_nfa(&mut rng, 4, 2);
            let p = powerset(&n).unwrap();
            let s = p.semilattice();
            let mut set = std::collections::BTreeSet::from([s.bottom(), p.init()]);
            loop {
                let mut next = set.clone();
                for &x in &set {
                    for &y in &set {
                        next.insert(s.join(x, y));
                    }
                    for a in 0..2 {
                        next.insert(p.step(x, a));
                    }
                }
                if next == set {
                    break;
                }
                set = next;
            }
            let (_, emb) = reachable_part(&p);
            let got: std::collections::BTreeSet<usize> = emb.table().iter().map(|&x| x as usize).collect();
            assert_eq!(got, set);
        }
    }

    #[test]
    fn isolated_top_is_dropped() {
        // 2^2 with both transitions constant bottom except init ↦ init: top is not reachable.
        let s = Arc::new(FiniteSemilattice::powerset(2).unwrap());
        let a = JslDfa::from_tables(s, vec![vec![0, 1, 0, 1]], 1, 2);
        let (r, _) = reachable_part(&a);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn dual_is_an_involution_and_reverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..60 {
            let n = random_nfa(&mut rng, 4, 2);
            let p = powerset(&n).unwrap();
            let d = dual_auto(&p);
            assert_eq!(d.language(), n.language().reverse());
            let dd = dual_auto(&d);
            let id = JslMorphism::new_unchecked(
                dd.semilattice().clone(),
                p.semilattice().clone(),
                (0..p.len() as u32).collect(),
            );
            assert!(is_automaton_isomorphism(&id, &dd, &p));
        }
    }

    #[test]
    fn generic_dual_agrees_with_complement_fast_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..60 {
            let n = random_nfa(&mut rng, 4, 2);
            let k = n.n_states();
            let d = dual_auto(&powerset(&n).unwrap());
            let fast = dual_powerset(&n).unwrap();
            let full = (1u32 << k) - 1;
            let f = JslMorphism::new_unchecked(
                d.semilattice().clone(),
                fast.semilattice().clone(),
                (0..1u32 << k).map(|x| full & !x).collect(),
            );
            assert!(is_automaton_isomorphism(&f, &d, &fast));
        }
    }
}
