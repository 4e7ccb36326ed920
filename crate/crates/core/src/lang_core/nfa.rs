use std::collections::HashMap;
use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::alphabet::Symbol;
use super::dfa::Dfa;
use super::handle::LanguageHandle;

/// Nondeterministic automaton with a set of initial states. Zero states denote ∅.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nfa {
    n_symbols: usize,
    n_states: usize,
    /// `trans[a][s]` is the sorted successor list of `s` under `a`.
    trans: Vec<Vec<Vec<u32>>>,
    initial: Vec<u32>,
    finals: Vec<u32>,
}

impl Nfa {
    pub fn new(n_symbols: usize, n_states: usize) -> Self {
        Nfa {
            n_symbols,
            n_states,
            trans: vec![vec![Vec::new(); n_states]; n_symbols],
            initial: Vec::new(),
            finals: Vec::new(),
        }
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn finals(&self) -> &[u32] {
        &self.finals
    }

    pub fn successors(&self, s: u32, a: Symbol) -> &[u32] {
        &self.trans[a as usize][s as usize]
    }

    pub fn is_initial(&self, s: u32) -> bool {
        self.initial.binary_search(&s).is_ok()
    }

    pub fn is_final(&self, s: u32) -> bool {
        self.finals.binary_search(&s).is_ok()
    }

    pub fn add_transition(&mut self, src: u32, a: Symbol, dst: u32) {
        let v = &mut self.trans[a as usize][src as usize];
        if let Err(i) = v.binary_search(&dst) {
            v.insert(i, dst);
        }
    }

    pub fn set_initial(&mut self, states: impl IntoIterator<Item = u32>) {
        self.initial = sorted(states);
    }

    pub fn set_final(&mut self, states: impl IntoIterator<Item = u32>) {
        self.finals = sorted(states);
    }

    pub fn normalized(mut self) -> Self {
        for row in &mut self.trans {
            for v in row.iter_mut() {
                v.sort_unstable();
                v.dedup();
            }
        }
        self.initial = sorted(self.initial);
        self.finals = sorted(self.finals);
        self
    }

    /// All transitions `(src, symbol, dst)` in lexicographic order.
    pub fn transitions(&self) -> Vec<(u32, Symbol, u32)> {
        let mut out = Vec::new();
        for s in 0..self.n_states as u32 {
            for a in 0..self.n_symbols {
                for &t in &self.trans[a][s as usize] {
                    out.push((s, a as Symbol, t));
                }
            }
        }
        out
    }

    pub fn n_transitions(&self) -> usize {
        self.trans.iter().flatten().map(Vec::len).sum()
    }

    pub fn with_initial(&self, states: impl IntoIterator<Item = u32>) -> Nfa {
        let mut n = self.clone();
        n.set_initial(states);
        n
    }

    pub fn with_finals(&self, states: impl IntoIterator<Item = u32>) -> Nfa {
        let mut n = self.clone();
        n.set_final(states);
        n
    }

    /// Flips every transition and swaps initial and final states.
    pub fn reverse(&self) -> Nfa {
        let mut r = Nfa::new(self.n_symbols, self.n_states);
        for (s, a, t) in self.transitions() {
            r.trans[a as usize][t as usize].push(s);
        }
        r.initial = self.finals.clone();
        r.finals = self.initial.clone();
        r.normalized()
    }

    pub fn set_of(&self, states: &[u32]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.n_states);
        for &s in states {
            b.insert(s as usize);
        }
        b
    }

    pub fn step(&self, set: &FixedBitSet, a: Symbol) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n_states);
        for s in set.ones() {
            for &t in &self.trans[a as usize][s] {
                out.insert(t as usize);
            }
        }
        out
    }

    pub fn run(&self, word: &[Symbol]) -> FixedBitSet {
        let mut cur = self.set_of(&self.initial);
        for &a in word {
            cur = self.step(&cur, a);
        }
        cur
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.run(word).ones().any(|s| self.is_final(s as u32))
    }

    /// Reachable subset construction; state 0 is the initial subset.
    pub fn rsc(&self) -> Dfa {
        self.rsc_with_subsets().0
    }

    /// Reachable subset construction together with the subset carried by each state.
    pub fn rsc_with_subsets(&self) -> (Dfa, Vec<FixedBitSet>) {
        let k = self.n_symbols;
        let start = self.set_of(&self.initial);
        let mut index: HashMap<FixedBitSet, u32> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut trans: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for a in 0..k {
                let next = self.step(&subsets[i], a as Symbol);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let finals = subsets
            .iter()
            .map(|x| self.finals.iter().any(|&f| x.contains(f as usize)))
            .collect();
        (Dfa::from_parts(k, trans, 0, finals), subsets)
    }

    pub fn language(&self) -> LanguageHandle {
        LanguageHandle::from_nfa(self)
    }

    /// Language accepted from the single state `q`.
    pub fn state_language(&self, q: u32) -> LanguageHandle {
        LanguageHandle::from_nfa(&self.with_initial([q]))
    }

    pub fn state_languages(&self) -> Vec<LanguageHandle> {
        (0..self.n_states as u32).map(|q| self.state_language(q)).collect()
    }

    /// States reachable from the initial states.
    pub fn reachable(&self) -> FixedBitSet {
        let mut seen = self.set_of(&self.initial);
        let mut queue: VecDeque<u32> = self.initial.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for a in 0..self.n_symbols {
                for &t in &self.trans[a][s as usize] {
                    if !seen.put(t as usize) {
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Restriction to states that are reachable and co-reachable.
    pub fn trim_to_useful(&self) -> Nfa {
        let fwd = self.reachable();
        let bwd = self.reverse().reachable();
        let keep: Vec<u32> = (0..self.n_states as u32)
            .filter(|&s| fwd.contains(s as usize) && bwd.contains(s as usize))
            .collect();
        self.restrict(&keep)
    }

    /// Sub-automaton on `keep` (listed in increasing order), renumbered densely.
    pub fn restrict(&self, keep: &[u32]) -> Nfa {
        let mut map = vec![u32::MAX; self.n_states];
        for (i, &s) in keep.iter().enumerate() {
            map[s as usize] = i as u32;
        }
        let mut r = Nfa::new(self.n_symbols, keep.len());
        for (s, a, t) in self.transitions() {
            let (ms, mt) = (map[s as usize], map[t as usize]);
            if ms != u32::MAX && mt != u32::MAX {
                r.trans[a as usize][ms as usize].push(mt);
            }
        }
        r.initial = self
            .initial
            .iter()
            .map(|&s| map[s as usize])
            .filter(|&s| s != u32::MAX)
            .collect();
        r.finals = self
            .finals
            .iter()
            .map(|&s| map[s as usize])
            .filter(|&s| s != u32::MAX)
            .collect();
        r.normalized()
    }

    /// Renames state `s` to `perm[s]`.
    pub fn permuted(&self, perm: &[u32]) -> Nfa {
        let mut r = Nfa::new(self.n_symbols, self.n_states);
        for (s, a, t) in self.transitions() {
            r.trans[a as usize][perm[s as usize] as usize].push(perm[t as usize]);
        }
        r.initial = self.initial.iter().map(|&s| perm[s as usize]).collect();
        r.finals = self.finals.iter().map(|&s| perm[s as usize]).collect();
        r.normalized()
    }

    pub fn disjoint_union(&self, other: &Nfa) -> Nfa {
        assert_eq!(self.n_symbols, other.n_symbols);
        let off = self.n_states as u32;
        let mut r = Nfa::new(self.n_symbols, self.n_states + other.n_states);
        for (s, a, t) in self.transitions() {
            r.trans[a as usize][s as usize].push(t);
        }
        for (s, a, t) in other.transitions() {
            r.trans[a as usize][(s + off) as usize].push(t + off);
        }
        r.initial = self
            .initial
            .iter()
            .copied()
            .chain(other.initial.iter().map(|s| s + off))
            .collect();
        r.finals = self
            .finals
            .iter()
            .copied()
            .chain(other.finals.iter().map(|s| s + off))
            .collect();
        r.normalized()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.trans.iter().all(|row| row.iter().all(|v| v.len() == 1))
    }

    /// Exact state-renaming isomorphism search; returns `perm` with `self.permuted(perm) == other`.
    pub fn isomorphism(&self, other: &Nfa) -> Option<Vec<u32>> {
        if self.n_states != other.n_states
            || self.n_symbols != other.n_symbols
            || self.initial.len() != other.initial.len()
            || self.finals.len() != other.finals.len()
            || self.n_transitions() != other.n_transitions()
        {
            return None;
        }
        let n = self.n_states;
        let sig = |m: &Nfa, s: u32| {
            let mut v = vec![m.is_initial(s) as usize, m.is_final(s) as usize];
            for a in 0..m.n_symbols {
                v.push(m.trans[a][s as usize].len());
                v.push((0..m.n_states).filter(|&p| m.trans[a][p].contains(&s)).count());
            }
            v
        };
        let sa: Vec<Vec<usize>> = (0..n as u32).map(|s| sig(self, s)).collect();
        let sb: Vec<Vec<usize>> = (0..n as u32).map(|s| sig(other, s)).collect();
        let mut perm = vec![u32::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            a: &Nfa,
            b: &Nfa,
            sa: &[Vec<usize>],
            sb: &[Vec<usize>],
            perm: &mut Vec<u32>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == perm.len() {
                return a.permuted(perm) == *b;
            }
            for t in 0..perm.len() {
                if used[t] || sa[i] != sb[t] {
                    continue;
                }
                // partial consistency on already mapped states
                let ok = (0..i).all(|j| {
                    (0..a.n_symbols).all(|x| {
                        a.trans[x][i].contains(&(j as u32)) == b.trans[x][t].contains(&perm[j])
                            && a.trans[x][j].contains(&(i as u32)) == b.trans[x][perm[j] as usize].contains(&(t as u32))
                    })
                }) && (0..a.n_symbols)
                    .all(|x| a.trans[x][i].contains(&(i as u32)) == b.trans[x][t].contains(&(t as u32)));
                if !ok {
                    continue;
                }
                perm[i] = t as u32;
                used[t] = true;
                if go(i + 1, a, b, sa, sb, perm, used) {
                    return true;
                }
                used[t] = false;
            }
            perm[i] = u32::MAX;
            false
        }
        if go(0, self, other, &sa, &sb, &mut perm, &mut used) {
            Some(perm)
        } else {
            None
        }
    }
}

fn sorted(states: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut v: Vec<u32> = states.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}
