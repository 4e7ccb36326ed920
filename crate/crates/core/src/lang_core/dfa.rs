use std::collections::HashMap;
use std::collections::VecDeque;

use super::alphabet::Symbol;
use super::nfa::Nfa;

/// Complete deterministic automaton with transitions stored row-major by state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa {
    n_symbols: usize,
    trans: Vec<u32>,
    initial: u32,
    finals: Vec<bool>,
}

impl Dfa {
    /// All transitions initially point to state 0.
    pub fn new(n_symbols: usize, n_states: usize, initial: u32) -> Self {
        assert!(n_states >= 1, "a dfa has at least one state");
        Dfa {
            n_symbols,
            trans: vec![0; n_states * n_symbols],
            initial,
            finals: vec![false; n_states],
        }
    }

    pub fn from_parts(n_symbols: usize, trans: Vec<u32>, initial: u32, finals: Vec<bool>) -> Self {
        assert_eq!(trans.len(), finals.len() * n_symbols);
        assert!((initial as usize) < finals.len());
        debug_assert!(trans.iter().all(|&t| (t as usize) < finals.len()));
        Dfa {
            n_symbols,
            trans,
            initial,
            finals,
        }
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn n_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_final(&self, s: u32) -> bool {
        self.finals[s as usize]
    }

    pub fn set(&mut self, s: u32, a: Symbol, t: u32) {
        self.trans[s as usize * self.n_symbols + a as usize] = t;
    }

    pub fn set_final(&mut self, s: u32, f: bool) {
        self.finals[s as usize] = f;
    }

    #[inline]
    pub fn next(&self, s: u32, a: Symbol) -> u32 {
        self.trans[s as usize * self.n_symbols + a as usize]
    }

    pub fn run_from(&self, s: u32, word: &[Symbol]) -> u32 {
        word.iter().fold(s, |s, &a| self.next(s, a))
    }

    pub fn run(&self, word: &[Symbol]) -> u32 {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.is_final(self.run(word))
    }

    pub fn with_initial(&self, s: u32) -> Dfa {
        Dfa {
            initial: s,
            ..self.clone()
        }
    }

    pub fn with_finals(&self, finals: Vec<bool>) -> Dfa {
        assert_eq!(finals.len(), self.n_states());
        Dfa { finals, ..self.clone() }
    }

    pub fn complement(&self) -> Dfa {
        self.with_finals(self.finals.iter().map(|f| !f).collect())
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.n_symbols, self.n_states());
        for s in 0..self.n_states() as u32 {
            for a in 0..self.n_symbols as Symbol {
                n.add_transition(s, a, self.next(s, a));
            }
        }
        n.set_initial([self.initial]);
        n.set_final((0..self.n_states() as u32).filter(|&s| self.is_final(s)));
        n
    }

    /// Synchronous product with acceptance combined by `op`.
    pub fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.n_symbols, other.n_symbols, "alphabets differ");
        let k = self.n_symbols;
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k as Symbol {
                let next = (self.next(p, a), other.next(q, a));
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() as u32 - 1
                });
                trans.push(id);
            }
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| op(self.is_final(p), other.is_final(q)))
            .collect();
        Dfa::from_parts(k, trans, 0, finals)
    }

    /// States reachable from the initial state in breadth-first order, symbols in order.
    pub fn bfs_order(&self) -> Vec<u32> {
        let n = self.n_states();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for a in 0..self.n_symbols as Symbol {
                let t = self.next(s, a);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Shortest (then lexicographically least) word reaching each reachable state.
    pub fn access_words(&self) -> Vec<Option<Vec<Symbol>>> {
        let mut words: Vec<Option<Vec<Symbol>>> = vec![None; self.n_states()];
        words[self.initial as usize] = Some(Vec::new());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            let w = words[s as usize].clone().expect("visited");
            for a in 0..self.n_symbols as Symbol {
                let t = self.next(s, a);
                if words[t as usize].is_none() {
                    let mut wt = w.clone();
                    wt.push(a);
                    words[t as usize] = Some(wt);
                    queue.push_back(t);
                }
            }
        }
        words
    }

    /// Language-equivalence classes of all states (Moore refinement), numbered by first occurrence.
    pub fn language_classes(&self) -> Vec<u32> {
        let n = self.n_states();
        let k = self.n_symbols;
        let mut class: Vec<u32> = renumber(self.finals.iter().map(|&f| f as u32));
        let mut count = distinct(&class);
        loop {
            let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next_class = Vec::with_capacity(n);
            let mut key = Vec::with_capacity(k + 1);
            for s in 0..n {
                key.clear();
                key.push(class[s]);
                for a in 0..k {
                    key.push(class[self.trans[s * k + a] as usize]);
                }
                let len = index.len() as u32;
                let id = *index.entry(key.clone()).or_insert(len);
                next_class.push(id);
            }
            let new_count = index.len();
            class = next_class;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// Minimal automaton in canonical breadth-first numbering.
    pub fn minimize(&self) -> Dfa {
        let reach = self.bfs_order();
        let mut local = vec![u32::MAX; self.n_states()];
        for (i, &s) in reach.iter().enumerate() {
            local[s as usize] = i as u32;
        }
        let k = self.n_symbols;
        let mut trans = Vec::with_capacity(reach.len() * k);
        for &s in &reach {
            for a in 0..k as Symbol {
                trans.push(local[self.next(s, a) as usize]);
            }
        }
        let finals = reach.iter().map(|&s| self.is_final(s)).collect();
        let trimmed = Dfa::from_parts(k, trans, 0, finals);
        let class = trimmed.language_classes();
        let m = distinct(&class);
        let mut qtrans = vec![0u32; m * k];
        let mut qfinals = vec![false; m];
        for s in 0..trimmed.n_states() {
            let c = class[s] as usize;
            qfinals[c] = trimmed.finals[s];
            for a in 0..k {
                qtrans[c * k + a] = class[trimmed.trans[s * k + a] as usize];
            }
        }
        Dfa::from_parts(k, qtrans, class[0], qfinals).canonical_numbering()
    }

    /// Renumbers reachable states in breadth-first order and drops the rest.
    pub fn canonical_numbering(&self) -> Dfa {
        let order = self.bfs_order();
        let mut map = vec![u32::MAX; self.n_states()];
        for (i, &s) in order.iter().enumerate() {
            map[s as usize] = i as u32;
        }
        let k = self.n_symbols;
        let mut trans = Vec::with_capacity(order.len() * k);
        for &s in &order {
            for a in 0..k as Symbol {
                trans.push(map[self.next(s, a) as usize]);
            }
        }
        let finals = order.iter().map(|&s| self.is_final(s)).collect();
        Dfa::from_parts(k, trans, 0, finals)
    }

    pub fn is_minimal(&self) -> bool {
        self.minimize().n_states() == self.n_states()
    }

    /// `(state, symbol, target)` triples in order.
    pub fn transitions(&self) -> impl Iterator<Item = (u32, Symbol, u32)> + '_ {
        let k = self.n_symbols;
        self.trans
            .iter()
            .enumerate()
            .map(move |(i, &t)| ((i / k) as u32, (i % k) as Symbol, t))
    }
}

fn renumber(it: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut map: HashMap<u32, u32> = HashMap::new();
    it.map(|x| {
        let len = map.len() as u32;
        *map.entry(x).or_insert(len)
    })
    .collect()
}

fn distinct(v: &[u32]) -> usize {
    v.iter().copied().max().map_or(0, |m| m as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unary lasso recognizing {a^n : n != 5}: states 0..=5 on a path, 6 absorbing.
    fn not_five() -> Dfa {
        let mut d = Dfa::new(1, 7, 0);
        for s in 0..6 {
            d.set(s, 0, s + 1);
        }
        d.set(6, 0, 6);
        for s in 0..7 {
            d.set_final(s, s != 5);
        }
        d
    }

    /// Moore refinement written independently over state pairs.
    fn pairwise_distinguishable(d: &Dfa) -> usize {
        let n = d.n_states();
        let mut diff = vec![vec![false; n]; n];
        for p in 0..n {
            for q in 0..n {
                diff[p][q] = d.finals[p] != d.finals[q];
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for p in 0..n {
                for q in 0..n {
                    if diff[p][q] {
                        continue;
                    }
                    for a in 0..d.n_symbols() as Symbol {
                        let (x, y) = (d.next(p as u32, a) as usize, d.next(q as u32, a) as usize);
                        if diff[x][y] {
                            diff[p][q] = true;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
        (0..n).filter(|&p| (0..p).all(|q| diff[p][q])).count()
    }

    #[test]
    fn not_five_has_seven_states() {
        let d = not_five();
        assert_eq!(pairwise_distinguishable(&d), 7);
        assert_eq!(d.minimize().n_states(), 7);
    }

    #[test]
    fn minimize_is_idempotent_and_merges() {
        let mut d = Dfa::new(1, 4, 0);
        d.set(0, 0, 1);
        d.set(1, 0, 2);
        d.set(2, 0, 3);
        d.set(3, 0, 0);
        d.set_final(0, true);
        d.set_final(2, true);
        let m = d.minimize();
        assert_eq!(m.n_states(), 2);
        assert_eq!(m.minimize(), m);
        for n in 0..10 {
            let w = vec![0; n];
            assert_eq!(d.accepts(&w), m.accepts(&w));
        }
    }

    #[test]
    fn product_and_complement() {
        let d = not_five();
        let c = d.complement();
        let both = d.product(&c, |x, y| x && y).minimize();
        assert_eq!(both.n_states(), 1);
        assert!(!both.is_final(0));
    }

    #[test]
    fn access_words_are_shortest() {
        let d = not_five();
        let w = d.access_words();
        assert_eq!(w[6].as_deref(), Some(&[0u8; 6][..]));
    }
}
