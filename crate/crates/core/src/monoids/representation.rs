use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jsl_automata::{minimal_jsl, JslDfa};
use crate::lang_core::{Dfa, LanguageHandle, Symbol};
use crate::semilattice::{FiniteSemilattice, JslMorphism};

use super::monoid::{syntactic_monoid, FiniteMonoid, MONOID_BUDGET};

/// Monoid acting on a finite semilattice by join-preserving endomorphisms.
///
/// Only the letter actions are stored; `action(m)` composes them along a witness of `m`,
/// applying the first letter first.
#[derive(Clone, Debug)]
pub struct BooleanRepresentation {
    monoid: Arc<FiniteMonoid>,
    carrier: Arc<FiniteSemilattice>,
    gens: Vec<JslMorphism>,
}

impl BooleanRepresentation {
    /// Checks that each letter acts by a join-preserving map and that congruent words act equally.
    pub fn new(monoid: Arc<FiniteMonoid>, carrier: Arc<FiniteSemilattice>, gens: Vec<JslMorphism>) -> Result<Self> {
        if gens.len() != monoid.n_symbols() {
            return Err(Error::Precondition("one action per letter required".into()));
        }
        for g in &gens {
            if g.dom().len() != carrier.len() || g.cod().len() != carrier.len() {
                return Err(Error::Precondition("action outside the carrier".into()));
            }
            g.validate()?;
        }
        let r = BooleanRepresentation { monoid, carrier, gens };
        r.check_well_defined()?;
        Ok(r)
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn carrier(&self) -> &Arc<FiniteSemilattice> {
        &self.carrier
    }

    pub fn letter_action(&self, a: Symbol) -> &JslMorphism {
        &self.gens[a as usize]
    }

    /// Endomorphism table of a word.
    pub fn word_action(&self, w: &[Symbol]) -> Vec<u32> {
        (0..self.carrier.len())
            .map(|x| w.iter().fold(x, |x, &a| self.gens[a as usize].apply(x)) as u32)
            .collect()
    }

    pub fn action(&self, m: u32) -> Vec<u32> {
        self.word_action(self.monoid.witness(m))
    }

    /// `|J(carrier)|`.
    pub fn degree(&self) -> usize {
        self.carrier.join_irreducibles().len()
    }

    /// For every element and letter, the witness of `m·[a]` acts as the action of `m` followed by `a`.
    fn check_well_defined(&self) -> Result<()> {
        let actions: Vec<Vec<u32>> = (0..self.monoid.len() as u32).map(|m| self.action(m)).collect();
        if actions[self.monoid.unit() as usize]
            .iter()
            .enumerate()
            .any(|(x, &y)| x as u32 != y)
        {
            return Err(Error::Precondition("unit does not act as the identity".into()));
        }
        for m in 0..self.monoid.len() as u32 {
            for a in 0..self.monoid.n_symbols() as Symbol {
                let composed: Vec<u32> = actions[m as usize]
                    .iter()
                    .map(|&y| self.gens[a as usize].apply(y as usize) as u32)
                    .collect();
                if composed != actions[self.monoid.right_step(m, a) as usize] {
                    return Err(Error::Precondition(format!(
                        "congruent words act differently (element {m}, letter {a})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `f(ρ₁(a)(s)) = ρ₂(a)(f(s))` on every letter, which suffices since letters generate.
pub fn is_equivariant(r1: &BooleanRepresentation, r2: &BooleanRepresentation, f: &JslMorphism) -> bool {
    f.dom().len() == r1.carrier.len()
        && f.cod().len() == r2.carrier.len()
        && f.is_valid()
        && r1
            .gens
            .iter()
            .zip(&r2.gens)
            .all(|(g1, g2)| (0..r1.carrier.len()).all(|s| f.apply(g1.apply(s)) == g2.apply(f.apply(s))))
}

/// `[w] ↦ (K ↦ w⁻¹K)` on the union closure of the left derivatives.
pub fn canonical_representation(l: &LanguageHandle) -> Result<BooleanRepresentation> {
    let q = minimal_jsl(l)?;
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    BooleanRepresentation::new(Arc::new(syn), q.semilattice().clone(), q.deltas().to_vec())
}

/// `w ↦ (K ↦ w⁻¹K)` for arbitrary words, through the minimal semilattice automaton.
pub fn canonical_free(l: &LanguageHandle) -> Result<impl Fn(&[Symbol]) -> Vec<u32>> {
    let q = minimal_jsl(l)?;
    Ok(move |w: &[Symbol]| (0..q.len()).map(|x| q.run_from(x, w) as u32).collect())
}

/// Unary language `{a^n : w₀^n ∈ L}` with the isomorphism of its quotient semilattice onto that of `L`.
#[derive(Clone, Debug)]
pub struct UnaryLift {
    pub unary: LanguageHandle,
    pub unary_jsl: JslDfa,
    pub jsl: JslDfa,
    /// `X⁻¹L₀ ↦ g[X]⁻¹L` with `g(a) = w₀`.
    pub iso: JslMorphism,
    pub generator: Vec<Symbol>,
    /// For each letter `b`, an exponent `n` with `b⁻¹K = (w₀^n)⁻¹K` on every derivative.
    pub exponents: Vec<usize>,
}

impl UnaryLift {
    /// Both commuting squares: `f ∘ a⁻¹ = w₀⁻¹ ∘ f` and `f ∘ (a^{n_b})⁻¹ = b⁻¹ ∘ f`.
    pub fn squares_commute(&self) -> bool {
        let f = &self.iso;
        let (u, q) = (&self.unary_jsl, &self.jsl);
        let first = (0..u.len()).all(|x| f.apply(u.step(x, 0)) == q.run_from(f.apply(x), &self.generator));
        let second = self.exponents.iter().enumerate().all(|(b, &n)| {
            let an = vec![0 as Symbol; n];
            (0..u.len()).all(|x| f.apply(u.run_from(x, &an)) == q.step(f.apply(x), b as Symbol))
        });
        first && second
    }
}

pub fn lift_to_unary(l: &LanguageHandle, w0: &[Symbol]) -> Result<UnaryLift> {
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    let g = syn.word_class(w0);
    if !syn.is_group() {
        return Err(Error::Precondition("syntactic monoid is not a group".into()));
    }
    let order = {
        let mut x = g;
        let mut k = 1;
        while x != syn.unit() {
            x = syn.mul(x, g);
            k += 1;
        }
        k
    };
    if order != syn.len() {
        return Err(Error::Precondition(
            "word does not generate the syntactic monoid".into(),
        ));
    }
    let d = l.dfa();
    let mut u = Dfa::new(1, order, 0);
    let mut state = d.initial();
    for i in 0..order as u32 {
        u.set_final(i, d.is_final(state));
        u.set(i, 0, (i + 1) % order as u32);
        state = d.run_from(state, w0);
    }
    let unary = LanguageHandle::from_dfa(&u);
    let unary_jsl = minimal_jsl(&unary)?;
    let jsl = minimal_jsl(l)?;
    // derivative (a^n)⁻¹L₀ ↦ (w₀^n)⁻¹L, extended to joins of derivatives below
    let (mut x0, mut x) = (unary_jsl.init(), jsl.init());
    let mut pairs = Vec::with_capacity(order);
    for _ in 0..order {
        pairs.push((x0, x));
        x0 = unary_jsl.step(x0, 0);
        x = jsl.run_from(x, w0);
    }
    let (su, sq) = (unary_jsl.semilattice(), jsl.semilattice());
    let map = (0..unary_jsl.len())
        .map(|e| sq.join_all(pairs.iter().filter(|(d0, _)| su.leq(*d0, e)).map(|&(_, d)| d)) as u32)
        .collect();
    let iso = JslMorphism::new_unchecked(su.clone(), sq.clone(), map);
    if !crate::semilattice::is_isomorphism(&iso) {
        return Err(Error::Precondition(
            "derivative correspondence is not an isomorphism".into(),
        ));
    }
    let exponents = (0..l.n_symbols() as Symbol)
        .map(|b| {
            let target = syn.word_class(&[b]);
            let mut x = syn.unit();
            let mut n = 0;
            while x != target {
                x = syn.mul(x, g);
                n += 1;
            }
            n
        })
        .collect();
    Ok(UnaryLift {
        unary,
        unary_jsl,
        jsl,
        iso,
        generator: w0.to_vec(),
        exponents,
    })
}
