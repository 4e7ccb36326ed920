use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::bits;
use crate::error::{Error, Result};
use crate::lang_core::{Dfa, LanguageHandle, Nfa, Symbol};
use crate::monoids::FiniteMonoid;
use crate::semilattice::{FiniteSemilattice, MAX_ELEMENTS};

use super::JslDfa;

/// Atoms of a finite boolean algebra of languages closed under left derivatives.
///
/// Every word lies in exactly one atom and `atom(a·w)` depends only on `a` and `atom(w)`;
/// a member of the algebra is the set of atoms it contains. Atoms taken from a monoid
/// also carry the right action, so the algebra is closed under right derivatives too.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    n_symbols: usize,
    act: Vec<Vec<u32>>,
    right: Option<Vec<Vec<u32>>>,
    eps: u32,
    language: FixedBitSet,
    derivatives: Vec<FixedBitSet>,
}

impl AtomSpace {
    /// Atoms generated by the left derivatives: words grouped by the set of derivatives
    /// containing them, i.e. by `{q : δ(q, w) ∈ F}` over the minimal dfa.
    pub fn left(l: &LanguageHandle) -> Self {
        let d = l.dfa();
        let n = d.n_states();
        let k = d.n_symbols();
        let start = bits::bitset(n, (0..n).filter(|&q| d.is_final(q as u32)));
        let mut index = HashMap::from([(start.clone(), 0u32)]);
        let mut profiles = vec![start];
        let mut act: Vec<Vec<u32>> = vec![Vec::new(); k];
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            for a in 0..k as Symbol {
                let p = &profiles[i as usize];
                let pre = bits::bitset(n, (0..n).filter(|&q| p.contains(d.next(q as u32, a) as usize)));
                let j = *index.entry(pre.clone()).or_insert_with(|| {
                    profiles.push(pre);
                    queue.push_back(profiles.len() as u32 - 1);
                    profiles.len() as u32 - 1
                });
                act[a as usize].push(j);
            }
        }
        let m = profiles.len();
        let derivatives = (0..n)
            .map(|q| bits::bitset(m, (0..m).filter(|&i| profiles[i].contains(q))))
            .collect::<Vec<_>>();
        let language = derivatives[d.initial() as usize].clone();
        AtomSpace {
            n_symbols: k,
            act,
            right: None,
            eps: 0,
            language,
            derivatives,
        }
    }

    /// Atoms generated by the two-sided derivatives: the syntactic classes.
    pub fn syntactic(l: &LanguageHandle, syn: &FiniteMonoid) -> Self {
        Self::from_monoid(l.dfa(), syn)
    }

    /// Classes of the transition monoid `tm` of `d`; `derivatives()` lists the state languages of `d`.
    pub fn from_monoid(d: &Dfa, tm: &FiniteMonoid) -> Self {
        let m = tm.len();
        let k = d.n_symbols();
        let action = |step: &dyn Fn(u32, Symbol) -> u32| -> Vec<Vec<u32>> {
            (0..k as Symbol)
                .map(|a| (0..m as u32).map(|x| step(x, a)).collect())
                .collect()
        };
        let derivatives: Vec<FixedBitSet> = (0..d.n_states())
            .map(|q| bits::bitset(m, (0..m).filter(|&x| d.is_final(tm.map(x as u32)[q]))))
            .collect();
        AtomSpace {
            n_symbols: k,
            act: action(&|x, a| tm.left_step(x, a)),
            right: Some(action(&|x, a| tm.right_step(x, a))),
            eps: tm.unit(),
            language: derivatives[d.initial() as usize].clone(),
            derivatives,
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.act.first().map_or(1, |v| v.len())
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    /// Atom containing `ε`.
    pub fn eps(&self) -> u32 {
        self.eps
    }

    /// Atom of `a·w` for `w` in atom `i`.
    pub fn act(&self, a: Symbol, i: u32) -> u32 {
        self.act[a as usize][i as usize]
    }

    pub fn atom_of(&self, w: &[Symbol]) -> u32 {
        w.iter().rev().fold(self.eps, |i, &a| self.act(a, i))
    }

    /// The language itself as a set of atoms.
    pub fn language(&self) -> &FixedBitSet {
        &self.language
    }

    /// Left derivatives in canonical state order of the minimal dfa.
    pub fn derivatives(&self) -> &[FixedBitSet] {
        &self.derivatives
    }

    /// `a⁻¹K`.
    pub fn derivative(&self, k: &FixedBitSet, a: Symbol) -> FixedBitSet {
        let n = self.n_atoms();
        bits::bitset(n, (0..n).filter(|&i| k.contains(self.act(a, i as u32) as usize)))
    }

    /// `K a⁻¹`, available for atoms taken from a monoid.
    pub fn right_derivative(&self, k: &FixedBitSet, a: Symbol) -> Option<FixedBitSet> {
        let right = self.right.as_ref()?;
        let n = self.n_atoms();
        Some(bits::bitset(
            n,
            (0..n).filter(|&i| k.contains(right[a as usize][i] as usize)),
        ))
    }

    /// State languages of `d` as atom sets, or `None` if some state language is not a member.
    ///
    /// Requires atoms taken from a monoid. Words are explored through the right action with
    /// the language class reached in `d` as payload; membership holds iff the payload is a
    /// function of the atom, which is checked on every edge.
    pub fn coordinates_of(&self, d: &Dfa) -> Option<Vec<FixedBitSet>> {
        let right = self.right.as_ref()?;
        let class = d.language_classes();
        let n = self.n_atoms();
        let states: Vec<u32> = (0..d.n_states() as u32).collect();
        let mut payload: Vec<Option<Vec<u32>>> = vec![None; n];
        payload[self.eps as usize] = Some(states.iter().map(|&q| class[q as usize]).collect());
        let mut rep: Vec<Option<Vec<u32>>> = vec![None; n];
        rep[self.eps as usize] = Some(states.clone());
        let mut queue = VecDeque::from([self.eps]);
        while let Some(i) = queue.pop_front() {
            let cur = rep[i as usize].clone().expect("visited");
            for a in 0..self.n_symbols as Symbol {
                let j = right[a as usize][i as usize];
                let next: Vec<u32> = cur.iter().map(|&q| d.next(q, a)).collect();
                let cls: Vec<u32> = next.iter().map(|&q| class[q as usize]).collect();
                match &payload[j as usize] {
                    Some(p) if *p != cls => return None,
                    Some(_) => {}
                    None => {
                        payload[j as usize] = Some(cls);
                        rep[j as usize] = Some(next);
                        queue.push_back(j);
                    }
                }
            }
        }
        let reps: Vec<Vec<u32>> = rep.into_iter().map(|r| r.expect("every atom is reached")).collect();
        Some(
            states
                .iter()
                .map(|&q| bits::bitset(n, (0..n).filter(|&i| d.is_final(reps[i][q as usize]))))
                .collect(),
        )
    }

    pub fn contains_epsilon(&self, k: &FixedBitSet) -> bool {
        k.contains(self.eps as usize)
    }

    /// Dfa accepting `rev K`: it reads a word backwards through the atom action.
    pub fn reverse_dfa(&self, k: &FixedBitSet) -> Dfa {
        let n = self.n_atoms();
        let mut d = Dfa::new(self.n_symbols, n, self.eps);
        for i in 0..n as u32 {
            d.set_final(i, k.contains(i as usize));
            for a in 0..self.n_symbols as Symbol {
                d.set(i, a, self.act(a, i));
            }
        }
        d
    }

    pub fn handle_of(&self, k: &FixedBitSet) -> LanguageHandle {
        LanguageHandle::from_dfa(&self.reverse_dfa(k)).reverse()
    }

    /// The atoms making up `k`, or `None` when `k` is not a member of the algebra.
    pub fn locate(&self, k: &LanguageHandle) -> Option<FixedBitSet> {
        let r = k.reverse();
        let rd = r.dfa();
        let mut verdict: Vec<Option<bool>> = vec![None; self.n_atoms()];
        let start = (self.eps, rd.initial());
        let mut seen = HashMap::from([(start, ())]);
        let mut queue = VecDeque::from([start]);
        while let Some((i, q)) = queue.pop_front() {
            let f = rd.is_final(q);
            match verdict[i as usize] {
                Some(v) if v != f => return None,
                _ => verdict[i as usize] = Some(f),
            }
            for a in 0..self.n_symbols as Symbol {
                let next = (self.act(a, i), rd.next(q, a));
                if seen.insert(next, ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
        Some(bits::bitset(
            self.n_atoms(),
            (0..self.n_atoms()).filter(|&i| verdict[i] == Some(true)),
        ))
    }

    /// Nfa on the atoms whose state `i` accepts exactly atom `i`.
    pub fn atom_nfa(&self) -> Nfa {
        let n = self.n_atoms();
        let mut nfa = Nfa::new(self.n_symbols, n);
        for a in 0..self.n_symbols as Symbol {
            for j in 0..n as u32 {
                nfa.add_transition(self.act(a, j), a, j);
            }
        }
        nfa.set_initial(self.language.ones().map(|i| i as u32));
        nfa.set_final([self.eps]);
        nfa.normalized()
    }

    /// The whole algebra as a sub-automaton of the final automaton; element index = atom bitmask.
    pub fn to_jsl_dfa(&self) -> Result<JslDfa> {
        let n = self.n_atoms();
        if n >= 63 || 1usize << n > MAX_ELEMENTS {
            return Err(Error::budget("boolean algebra elements", MAX_ELEMENTS as u64));
        }
        let s = Arc::new(FiniteSemilattice::powerset(n)?);
        let tables = (0..self.n_symbols as Symbol)
            .map(|a| {
                (0..1u64 << n)
                    .map(|x| {
                        (0..n)
                            .filter(|&i| x >> self.act(a, i as u32) & 1 == 1)
                            .fold(0u32, |m, i| m | 1 << i)
                    })
                    .collect()
            })
            .collect();
        let mask = |b: &FixedBitSet| b.ones().fold(0usize, |m, i| m | 1 << i);
        let full = (1usize << n) - 1;
        Ok(JslDfa::from_tables(
            s,
            tables,
            mask(&self.language),
            full & !(1 << self.eps),
        ))
    }
}
