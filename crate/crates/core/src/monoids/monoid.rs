use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lang_core::{Alphabet, Dfa, LanguageHandle, Symbol};

/// Default element budget for monoid generation.
pub const MONOID_BUDGET: usize = 1 << 16;

/// Transformation monoid of a dfa: element `m` is the map `δ_w` of its witness `w`.
///
/// Products follow the automaton convention `δ_{vw} = δ_w ∘ δ_v`, so `[v]·[w]` applies
/// `v` first. Element 0 is the unit; witnesses are shortlex-least.
#[derive(Clone, Debug)]
pub struct FiniteMonoid {
    n_symbols: usize,
    maps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    witnesses: Vec<Vec<Symbol>>,
    mul: OnceLock<Vec<u32>>,
}

/// How two monoids generated by the same alphabet relate through their word maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientRelation {
    Iso,
    FirstCoversSecond,
    SecondCoversFirst,
    Incomparable,
}

impl FiniteMonoid {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn unit(&self) -> u32 {
        0
    }

    /// Class of each letter.
    pub fn gens(&self) -> Vec<u32> {
        (0..self.n_symbols).map(|a| self.right[a][0]).collect()
    }

    /// `m·[a]`.
    pub fn right_step(&self, m: u32, a: Symbol) -> u32 {
        self.right[a as usize][m as usize]
    }

    /// `[a]·m`.
    pub fn left_step(&self, m: u32, a: Symbol) -> u32 {
        self.left[a as usize][m as usize]
    }

    /// The transformation `δ_w` for a witness `w` of `m`.
    pub fn map(&self, m: u32) -> &[u32] {
        &self.maps[m as usize]
    }

    pub fn witness(&self, m: u32) -> &[Symbol] {
        &self.witnesses[m as usize]
    }

    pub fn witnesses(&self) -> &[Vec<Symbol>] {
        &self.witnesses
    }

    pub fn word_class(&self, w: &[Symbol]) -> u32 {
        w.iter().fold(0, |m, &a| self.right_step(m, a))
    }

    pub fn element_of_map(&self, map: &[u32]) -> Option<u32> {
        self.index.get(map).copied()
    }

    /// `x·y`, the class of `w_x w_y`.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if let Some(t) = self.mul.get() {
            return t[x as usize * self.len() + y as usize];
        }
        self.witnesses[y as usize].iter().fold(x, |m, &a| self.right_step(m, a))
    }

    /// Row-major multiplication table.
    pub fn mul_table(&self) -> &[u32] {
        self.mul.get_or_init(|| {
            let n = self.len();
            let mut t = Vec::with_capacity(n * n);
            for x in 0..n as u32 {
                for y in 0..n as u32 {
                    t.push(self.witnesses[y as usize].iter().fold(x, |m, &a| self.right_step(m, a)));
                }
            }
            t
        })
    }

    /// The monoid as a dfa: states are elements, start at the unit, `m →a m·[a]`.
    pub fn as_dfa(&self, accepting: impl Fn(u32) -> bool) -> Dfa {
        let n = self.len();
        let k = self.n_symbols;
        let mut trans = Vec::with_capacity(n * k);
        for m in 0..n {
            for a in 0..k {
                trans.push(self.right[a][m]);
            }
        }
        let finals = (0..n as u32).map(accepting).collect();
        Dfa::from_parts(k, trans, 0, finals)
    }

    /// Elements `m` with `δ_w(init) ∈ F`, the set recognizing `L(d)` for the generating dfa `d`.
    pub fn accepting_set(&self, d: &Dfa) -> Vec<bool> {
        self.maps.iter().map(|f| d.is_final(f[d.initial() as usize])).collect()
    }

    /// Whether every element has an inverse; a transformation monoid is a group iff all maps are bijective.
    pub fn is_group(&self) -> bool {
        self.maps.iter().all(|f| {
            let mut hit = vec![false; f.len()];
            f.iter().all(|&y| !std::mem::replace(&mut hit[y as usize], true))
        })
    }

    /// Least element whose powers exhaust a group monoid, if the monoid is a cyclic group.
    pub fn cyclic_generator(&self) -> Option<u32> {
        if !self.is_group() {
            return None;
        }
        (0..self.len() as u32).find(|&g| {
            let mut x = g;
            let mut order = 1;
            while x != 0 {
                x = self.mul(x, g);
                order += 1;
                if order > self.len() {
                    return false;
                }
            }
            order == self.len()
        })
    }

    pub fn is_cyclic_group(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// `{size, mul, unit, gens, witnesses}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "size": self.len(),
            "mul": self.mul_table(),
            "unit": self.unit(),
            "gens": self.gens(),
            "witnesses": self.witnesses.iter().map(|w| alphabet.format_word(w)).collect::<Vec<_>>(),
        })
    }
}

/// Monoid of the maps `δ_w` of `d`, generated breadth-first in shortlex order of witnesses.
pub fn transition_monoid(d: &Dfa, budget: usize) -> Result<FiniteMonoid> {
    let k = d.n_symbols();
    let n = d.n_states();
    let id: Vec<u32> = (0..n as u32).collect();
    let mut index = HashMap::from([(id.clone(), 0u32)]);
    let mut maps = vec![id];
    let mut witnesses = vec![Vec::new()];
    let mut right: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut queue = VecDeque::from([0u32]);
    while let Some(m) = queue.pop_front() {
        for a in 0..k as Symbol {
            let f: Vec<u32> = maps[m as usize].iter().map(|&q| d.next(q, a)).collect();
            let t = match index.get(&f) {
                Some(&t) => t,
                None => {
                    if maps.len() >= budget {
                        return Err(Error::budget("monoid elements", budget as u64));
                    }
                    let t = maps.len() as u32;
                    let mut w = witnesses[m as usize].clone();
                    w.push(a);
                    index.insert(f.clone(), t);
                    maps.push(f);
                    witnesses.push(w);
                    queue.push_back(t);
                    t
                }
            };
            let r = &mut right[a as usize];
            if r.len() <= m as usize {
                r.resize(m as usize + 1, 0);
            }
            r[m as usize] = t;
        }
    }
    let left = (0..k as Symbol)
        .map(|a| {
            maps.iter()
                .map(|f| {
                    let g: Vec<u32> = (0..n as u32).map(|q| f[d.next(q, a) as usize]).collect();
                    index[&g]
                })
                .collect()
        })
        .collect();
    Ok(FiniteMonoid {
        n_symbols: k,
        maps,
        index,
        right,
        left,
        witnesses,
        mul: OnceLock::new(),
    })
}

/// `tm(minDfa(L))`.
pub fn syntactic_monoid(l: &LanguageHandle, budget: usize) -> Result<FiniteMonoid> {
    transition_monoid(l.dfa(), budget)
}

/// Compares the two word maps `Σ* → m1` and `Σ* → m2` by exploring reachable pairs.
pub fn monoid_quotient_compare(m1: &FiniteMonoid, m2: &FiniteMonoid) -> QuotientRelation {
    assert_eq!(m1.n_symbols, m2.n_symbols, "monoids over different alphabets");
    let mut img1 = vec![u32::MAX; m1.len()];
    let mut img2 = vec![u32::MAX; m2.len()];
    let (mut f1, mut f2) = (true, true);
    let mut seen = HashMap::from([((0u32, 0u32), ())]);
    let mut queue = VecDeque::from([(0u32, 0u32)]);
    while let Some((x, y)) = queue.pop_front() {
        for (img, from, to, ok) in [(&mut img1, x, y, &mut f1), (&mut img2, y, x, &mut f2)] {
            if img[from as usize] == u32::MAX {
                img[from as usize] = to;
            } else if img[from as usize] != to {
                *ok = false;
            }
        }
        for a in 0..m1.n_symbols as Symbol {
            let next = (m1.right_step(x, a), m2.right_step(y, a));
            if seen.insert(next, ()).is_none() {
                queue.push_back(next);
            }
        }
    }
    match (f1, f2) {
        (true, true) => QuotientRelation::Iso,
        (true, false) => QuotientRelation::FirstCoversSecond,
        (false, true) => QuotientRelation::SecondCoversFirst,
        (false, false) => QuotientRelation::Incomparable,
    }
}
