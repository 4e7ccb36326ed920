use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lang_core::{Dfa, LanguageHandle, Symbol};
use crate::semilattice::{FiniteSemilattice, JslMorphism};

/// Deterministic automaton whose states form a finite semilattice.
///
/// Transitions are join-preserving endomorphisms; the finals are the prime filter
/// `{x : x ≰ cofinal}`.
#[derive(Clone, Debug)]
pub struct JslDfa {
    s: Arc<FiniteSemilattice>,
    delta: Vec<JslMorphism>,
    init: usize,
    cofinal: usize,
    languages: OnceLock<Vec<LanguageHandle>>,
}

impl JslDfa {
    pub fn new(s: Arc<FiniteSemilattice>, delta: Vec<JslMorphism>, init: usize, cofinal: usize) -> Result<Self> {
        for f in &delta {
            if f.dom().len() != s.len() || f.cod().len() != s.len() {
                return Err(Error::Automaton("transition over a different semilattice".into()));
            }
            f.validate()?;
        }
        if init >= s.len() || cofinal >= s.len() {
            return Err(Error::Automaton("initial or cofinal element out of range".into()));
        }
        Ok(Self::new_unchecked(s, delta, init, cofinal))
    }

    pub(crate) fn new_unchecked(
        s: Arc<FiniteSemilattice>,
        delta: Vec<JslMorphism>,
        init: usize,
        cofinal: usize,
    ) -> Self {
        JslDfa {
            s,
            delta,
            init,
            cofinal,
            languages: OnceLock::new(),
        }
    }

    /// Builds transitions from per-symbol tables over `s`.
    pub(crate) fn from_tables(s: Arc<FiniteSemilattice>, tables: Vec<Vec<u32>>, init: usize, cofinal: usize) -> Self {
        let delta = tables
            .into_iter()
            .map(|t| JslMorphism::new_unchecked(s.clone(), s.clone(), t))
            .collect();
        Self::new_unchecked(s, delta, init, cofinal)
    }

    pub fn semilattice(&self) -> &Arc<FiniteSemilattice> {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn n_symbols(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self, a: Symbol) -> &JslMorphism {
        &self.delta[a as usize]
    }

    pub fn deltas(&self) -> &[JslMorphism] {
        &self.delta
    }

    #[inline]
    pub fn step(&self, x: usize, a: Symbol) -> usize {
        self.delta[a as usize].apply(x)
    }

    pub fn run_from(&self, x: usize, w: &[Symbol]) -> usize {
        w.iter().fold(x, |x, &a| self.step(x, a))
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn cofinal(&self) -> usize {
        self.cofinal
    }

    pub fn is_final(&self, x: usize) -> bool {
        !self.s.leq(x, self.cofinal)
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.is_final(self.run_from(self.init, w))
    }

    /// Underlying plain dfa on all elements.
    pub fn to_dfa(&self) -> Dfa {
        let n = self.len();
        let k = self.n_symbols();
        let mut trans = Vec::with_capacity(n * k);
        for x in 0..n {
            for f in &self.delta {
                trans.push(f.apply(x) as u32);
            }
        }
        let finals = (0..n).map(|x| self.is_final(x)).collect();
        Dfa::from_parts(k, trans, self.init as u32, finals)
    }

    pub fn language(&self) -> LanguageHandle {
        self.state_language(self.init)
    }

    pub fn state_language(&self, x: usize) -> LanguageHandle {
        self.state_languages()[x].clone()
    }

    /// Accepted language of every element, computed from one shared minimization.
    pub fn state_languages(&self) -> &[LanguageHandle] {
        self.languages.get_or_init(|| {
            let d = self.to_dfa();
            let classes = d.language_classes();
            let m = classes.iter().max().map_or(0, |&c| c as usize + 1);
            let k = d.n_symbols();
            let mut q = Dfa::new(k, m, 0);
            for x in 0..d.n_states() {
                let c = classes[x];
                q.set_final(c, d.is_final(x as u32));
                for a in 0..k as Symbol {
                    q.set(c, a, classes[d.next(x as u32, a) as usize]);
                }
            }
            let per_class: Vec<LanguageHandle> = (0..m as u32)
                .map(|c| LanguageHandle::from_dfa(&q.with_initial(c)))
                .collect();
            classes.iter().map(|&c| per_class[c as usize].clone()).collect()
        })
    }

    /// Language-equivalence class of every element.
    pub fn language_classes(&self) -> Vec<u32> {
        self.to_dfa().language_classes()
    }

    /// Whether distinct elements accept distinct languages.
    pub fn is_simple(&self) -> bool {
        let c = self.language_classes();
        let mut seen = vec![false; c.len()];
        c.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
    }

    /// Elements `δ_w(init)` for some word `w`, in breadth-first order.
    pub fn dfa_reachable(&self) -> Vec<usize> {
        self.to_dfa().bfs_order().into_iter().map(|x| x as usize).collect()
    }

    pub fn is_dfa_reachable(&self, x: usize) -> bool {
        self.dfa_reachable().contains(&x)
    }

    /// Elements that are joins of dfa-reachable elements.
    pub fn jsl_reachable(&self) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        member[self.s.bottom()] = true;
        let gens = self.dfa_reachable();
        let mut stack = vec![self.s.bottom()];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.s.join(x, g);
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        member
    }

    pub fn is_reachable(&self) -> bool {
        self.jsl_reachable().iter().all(|&b| b)
    }

    /// `{semilattice, delta, init, cofinal}`.
    pub fn to_json(&self) -> Value {
        json!({
            "semilattice": self.s.to_json(),
            "delta": self.delta.iter().map(|f| f.table().to_vec()).collect::<Vec<_>>(),
            "init": self.init,
            "cofinal": self.cofinal,
        })
    }
}

/// Whether `f` commutes with transitions, maps init to init and preserves and reflects finality.
pub fn is_automaton_morphism(f: &JslMorphism, a: &JslDfa, b: &JslDfa) -> bool {
    f.dom().len() == a.len()
        && f.cod().len() == b.len()
        && a.n_symbols() == b.n_symbols()
        && f.is_valid()
        && f.apply(a.init()) == b.init()
        && (0..a.len()).all(|x| {
            a.is_final(x) == b.is_final(f.apply(x))
                && (0..a.n_symbols() as Symbol).all(|s| f.apply(a.step(x, s)) == b.step(f.apply(x), s))
        })
}

/// Whether `f` is a bijective automaton morphism whose inverse preserves the order.
pub fn is_automaton_isomorphism(f: &JslMorphism, a: &JslDfa, b: &JslDfa) -> bool {
    crate::semilattice::is_isomorphism(f) && is_automaton_morphism(f, a, b)
}

/// The isomorphism between simple automata, matching elements by accepted language.
///
/// Simple automata admit at most one morphism into each other, so this is exhaustive.
pub fn simple_isomorphism(a: &JslDfa, b: &JslDfa) -> Option<JslMorphism> {
    if a.len() != b.len() || a.n_symbols() != b.n_symbols() {
        return None;
    }
    let classes = joint_language_classes(&[&a.to_dfa(), &b.to_dfa()]);
    let (ca, cb) = (&classes[0], &classes[1]);
    let mut of_class = std::collections::HashMap::new();
    for (y, &c) in cb.iter().enumerate() {
        if of_class.insert(c, y as u32).is_some() {
            return None;
        }
    }
    let map = ca
        .iter()
        .map(|c| of_class.get(c).copied())
        .collect::<Option<Vec<u32>>>()?;
    let f = JslMorphism::new_unchecked(a.semilattice().clone(), b.semilattice().clone(), map);
    is_automaton_isomorphism(&f, a, b).then_some(f)
}

/// Language classes of the states of several dfas over one alphabet, numbered jointly.
pub fn joint_language_classes(dfas: &[&Dfa]) -> Vec<Vec<u32>> {
    let k = dfas.first().map_or(0, |d| d.n_symbols());
    let total: usize = dfas.iter().map(|d| d.n_states()).sum();
    let mut u = Dfa::new(k, total.max(1), 0);
    let mut offset = 0u32;
    for d in dfas {
        assert_eq!(d.n_symbols(), k, "dfas over different alphabets");
        for s in 0..d.n_states() as u32 {
            u.set_final(offset + s, d.is_final(s));
            for a in 0..k as Symbol {
                u.set(offset + s, a, offset + d.next(s, a));
            }
        }
        offset += d.n_states() as u32;
    }
    let classes = u.language_classes();
    let mut out = Vec::with_capacity(dfas.len());
    let mut start = 0;
    for d in dfas {
        out.push(classes[start..start + d.n_states()].to_vec());
        start += d.n_states();
    }
    out
}
