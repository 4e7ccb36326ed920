use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::alphabet::Symbol;
use super::dfa::Dfa;
use super::nfa::Nfa;
use super::regex::Regex;

/// Canonical regular-language value: the minimal dfa in breadth-first numbering.
///
/// Equality is structural equality of the canonical dfa, hence language equality.
/// Handles are cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct LanguageHandle {
    dfa: Arc<Dfa>,
    id: u64,
}

/// Which side a derivative is taken on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided(Vec<Symbol>),
}

impl LanguageHandle {
    fn from_canonical(dfa: Dfa) -> Self {
        let mut h = DefaultHasher::new();
        dfa.hash(&mut h);
        LanguageHandle {
            id: h.finish(),
            dfa: Arc::new(dfa),
        }
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        Self::from_canonical(d.minimize())
    }

    pub fn from_nfa(n: &Nfa) -> Self {
        Self::from_canonical(n.rsc().minimize())
    }

    pub fn from_regex(r: &Regex, n_symbols: usize) -> Self {
        Self::from_nfa(&r.to_nfa(n_symbols))
    }

    pub fn empty(n_symbols: usize) -> Self {
        Self::from_canonical(Dfa::new(n_symbols, 1, 0))
    }

    pub fn universal(n_symbols: usize) -> Self {
        Self::empty(n_symbols).complement()
    }

    pub fn epsilon(n_symbols: usize) -> Self {
        let mut d = Dfa::new(n_symbols, 2, 0);
        for a in 0..n_symbols as Symbol {
            d.set(0, a, 1);
            d.set(1, a, 1);
        }
        d.set_final(0, true);
        Self::from_dfa(&d)
    }

    /// Finite language given by a list of words.
    pub fn from_words(n_symbols: usize, words: &[Vec<Symbol>]) -> Self {
        let mut trie: Vec<Vec<Option<u32>>> = vec![vec![None; n_symbols]];
        let mut finals = vec![false];
        for w in words {
            let mut s = 0usize;
            for &a in w {
                s = match trie[s][a as usize] {
                    Some(t) => t as usize,
                    None => {
                        trie.push(vec![None; n_symbols]);
                        finals.push(false);
                        let t = trie.len() - 1;
                        trie[s][a as usize] = Some(t as u32);
                        t
                    }
                };
            }
            finals[s] = true;
        }
        let sink = trie.len() as u32;
        let mut trans = Vec::with_capacity((trie.len() + 1) * n_symbols);
        for row in &trie {
            trans.extend(row.iter().map(|t| t.unwrap_or(sink)));
        }
        trans.extend(std::iter::repeat_n(sink, n_symbols));
        finals.push(false);
        Self::from_dfa(&Dfa::from_parts(n_symbols, trans, 0, finals))
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// Structural fingerprint; equal handles have equal ids.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn n_symbols(&self) -> usize {
        self.dfa.n_symbols()
    }

    /// Number of states of the minimal dfa, i.e. the number of left derivatives.
    pub fn n_states(&self) -> usize {
        self.dfa.n_states()
    }

    pub fn to_nfa(&self) -> Nfa {
        self.dfa.to_nfa()
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.dfa.accepts(word)
    }

    pub fn contains_epsilon(&self) -> bool {
        self.dfa.is_final(self.dfa.initial())
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.n_states() == 1 && !self.dfa.is_final(0)
    }

    pub fn is_universal(&self) -> bool {
        self.dfa.n_states() == 1 && self.dfa.is_final(0)
    }

    pub fn left_derivative(&self, u: &[Symbol]) -> Self {
        let s = self.dfa.run(u);
        if s == self.dfa.initial() {
            return self.clone();
        }
        Self::from_dfa(&self.dfa.with_initial(s))
    }

    /// `L v⁻¹ = { w : wv ∈ L }`.
    pub fn right_derivative(&self, v: &[Symbol]) -> Self {
        let finals = (0..self.dfa.n_states() as u32)
            .map(|s| self.dfa.is_final(self.dfa.run_from(s, v)))
            .collect();
        Self::from_dfa(&self.dfa.with_finals(finals))
    }

    pub fn derivative(&self, w: &[Symbol], side: &Side) -> Self {
        match side {
            Side::Left => self.left_derivative(w),
            Side::Right => self.right_derivative(w),
            Side::TwoSided(v) => self.left_derivative(w).right_derivative(v),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        Self::from_dfa(&self.dfa.product(&other.dfa, op))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> Self {
        Self::from_canonical(self.dfa.complement())
    }

    pub fn union_all<'a>(n_symbols: usize, it: impl IntoIterator<Item = &'a Self>) -> Self {
        it.into_iter().fold(Self::empty(n_symbols), |acc, x| acc.union(x))
    }

    pub fn intersect_all<'a>(n_symbols: usize, it: impl IntoIterator<Item = &'a Self>) -> Self {
        it.into_iter()
            .fold(Self::universal(n_symbols), |acc, x| acc.intersect(x))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.product_all(other, |x, y| !x || y)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.product_all(other, |x, y| !(x && y))
    }

    /// Whether `pred(p ∈ F, q ∈ F)` holds on every reachable state pair.
    fn product_all(&self, other: &Self, pred: impl Fn(bool, bool) -> bool) -> bool {
        let (a, b) = (&*self.dfa, &*other.dfa);
        let start = (a.initial(), b.initial());
        let mut seen = HashMap::from([(start, ())]);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            if !pred(a.is_final(p), b.is_final(q)) {
                return false;
            }
            for x in 0..a.n_symbols() as Symbol {
                let next = (a.next(p, x), b.next(q, x));
                if seen.insert(next, ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
        true
    }

    pub fn reverse(&self) -> Self {
        Self::from_nfa(&self.dfa.to_nfa().reverse())
    }

    /// `U⁻¹L = ⋃_{u ∈ U} u⁻¹L` with `self` as `L`.
    pub fn left_quotient_by_set(&self, u: &Self) -> Self {
        let (du, dl) = (&*u.dfa, &*self.dfa);
        let start = (du.initial(), dl.initial());
        let mut seen = HashMap::from([(start, ())]);
        let mut queue = VecDeque::from([start]);
        let mut initial = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            if du.is_final(p) {
                initial.push(q);
            }
            for x in 0..du.n_symbols() as Symbol {
                let next = (du.next(p, x), dl.next(q, x));
                if seen.insert(next, ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
        Self::from_nfa(&dl.to_nfa().with_initial(initial))
    }

    /// `L V⁻¹ = ⋃_{v ∈ V} L v⁻¹` with `self` as `L`.
    pub fn right_quotient_by_set(&self, v: &Self) -> Self {
        self.reverse().left_quotient_by_set(&v.reverse()).reverse()
    }

    /// Left derivatives in canonical state order, one per state of the minimal dfa.
    pub fn derivative_set(&self) -> Vec<Self> {
        (0..self.dfa.n_states() as u32)
            .map(|s| {
                if s == self.dfa.initial() {
                    self.clone()
                } else {
                    Self::from_dfa(&self.dfa.with_initial(s))
                }
            })
            .collect()
    }

    /// Shortest word leading to each state of the minimal dfa.
    pub fn derivative_words(&self) -> Vec<Vec<Symbol>> {
        self.dfa
            .access_words()
            .into_iter()
            .map(|w| w.expect("minimal dfa is reachable"))
            .collect()
    }

    /// Shortest, then lexicographically least, member.
    pub fn shortest_word(&self) -> Option<Vec<Symbol>> {
        let words = self.dfa.access_words();
        (0..self.dfa.n_states())
            .filter(|&s| self.dfa.is_final(s as u32))
            .filter_map(|s| words[s].clone())
            .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
    }

    /// All members of length at most `n`, in length-lexicographic order.
    pub fn words_up_to(&self, n: usize) -> Vec<Vec<Symbol>> {
        all_words(self.n_symbols(), n)
            .into_iter()
            .filter(|w| self.contains(w))
            .collect()
    }
}

/// Every word of length at most `n` in length-lexicographic order.
pub fn all_words(n_symbols: usize, n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * n_symbols);
        for w in &layer {
            for a in 0..n_symbols as Symbol {
                let mut v: Vec<Symbol> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl PartialEq for LanguageHandle {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && (Arc::ptr_eq(&self.dfa, &other.dfa) || self.dfa == other.dfa)
    }
}

impl Eq for LanguageHandle {}

impl Hash for LanguageHandle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for LanguageHandle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order on canonical dfas; arbitrary but deterministic.
impl Ord for LanguageHandle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dfa
            .n_states()
            .cmp(&other.dfa.n_states())
            .then_with(|| (*self.dfa).cmp(&*other.dfa))
    }
}

impl fmt::Debug for LanguageHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lang#{:016x}({} states)", self.id, self.dfa.n_states())
    }
}
