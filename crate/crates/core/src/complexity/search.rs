use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::jsl_automata::AtomSpace;
use crate::lang_core::{Dfa, LanguageHandle, Nfa, Symbol};
use crate::monoids::FiniteMonoid;

use super::budget::Meter;

/// Memo entries kept per search; beyond this the memo stops growing (it only prunes).
const MEMO_CAP: usize = 1 << 21;

/// Atom coordinates with at most 64 atoms: languages are `u64` masks.
#[derive(Clone, Debug)]
pub(crate) struct Coords {
    pub n_atoms: usize,
    pub n_symbols: usize,
    /// `act[a][i]`: atom of `a·w` for `w` in atom `i`.
    act: Vec<Vec<u32>>,
    pub eps: u32,
    pub language: u64,
    pub derivatives: Vec<u64>,
}

pub(crate) fn mask_of(set: &FixedBitSet) -> u64 {
    set.ones().fold(0, |m, i| m | 1 << i)
}

impl Coords {
    pub fn left(l: &LanguageHandle) -> Result<Self> {
        Self::from_atoms(&AtomSpace::left(l))
    }

    pub fn syntactic(l: &LanguageHandle, syn: &FiniteMonoid) -> Result<Self> {
        Self::from_atoms(&AtomSpace::syntactic(l, syn))
    }

    pub fn from_atoms(sp: &AtomSpace) -> Result<Self> {
        let n = sp.n_atoms();
        if n > 64 {
            return Err(Error::budget("atoms in mask coordinates", 64u64));
        }
        let k = sp.n_symbols();
        Ok(Coords {
            n_atoms: n,
            n_symbols: k,
            act: (0..k as Symbol)
                .map(|a| (0..n as u32).map(|i| sp.act(a, i)).collect())
                .collect(),
            eps: sp.eps(),
            language: mask_of(sp.language()),
            derivatives: sp.derivatives().iter().map(mask_of).collect(),
        })
    }

    /// `a⁻¹K`.
    pub fn derivative(&self, k: u64, a: Symbol) -> u64 {
        let act = &self.act[a as usize];
        (0..self.n_atoms)
            .filter(|&i| k >> act[i] & 1 == 1)
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn has_eps(&self, k: u64) -> bool {
        k >> self.eps & 1 == 1
    }

    /// Nfa with one state per member: `p →a q` iff `K_q ⊆ a⁻¹K_p`, initial iff `K_q ⊆ L`,
    /// final iff `ε ∈ K_q`. Each state accepts a subset of its member.
    pub fn maximal_nfa(&self, members: &[u64]) -> Nfa {
        let mut n = Nfa::new(self.n_symbols, members.len());
        for (p, &kp) in members.iter().enumerate() {
            for a in 0..self.n_symbols as Symbol {
                let d = self.derivative(kp, a);
                for (q, &kq) in members.iter().enumerate() {
                    if kq & !d == 0 {
                        n.add_transition(p as u32, a, q as u32);
                    }
                }
            }
        }
        n.set_initial((0..members.len() as u32).filter(|&q| members[q as usize] & !self.language == 0));
        n.set_final((0..members.len() as u32).filter(|&q| self.has_eps(members[q as usize])));
        n.normalized()
    }
}

/// Nonempty intersections of nonempty subfamilies of `family`, sorted by size then value.
pub(crate) fn intersection_closure(family: &[u64], budget: usize) -> Result<Vec<u64>> {
    let gens: Vec<u64> = {
        let mut g: Vec<u64> = family.iter().copied().filter(|&x| x != 0).collect();
        g.sort_unstable();
        g.dedup();
        g
    };
    let mut seen: HashSet<u64> = gens.iter().copied().collect();
    let mut out = gens.clone();
    let mut i = 0;
    while i < out.len() {
        for &g in &gens {
            let x = out[i] & g;
            if x != 0 && seen.insert(x) {
                if out.len() >= budget {
                    return Err(Error::budget("intersection closure", budget as u64));
                }
                out.push(x);
            }
        }
        i += 1;
    }
    out.sort_by_key(|&x| (x.count_ones(), x));
    Ok(out)
}

/// Whether `L(dfa) ⊆ L(n)` for an nfa with at most 64 states.
pub(crate) fn dfa_included(d: &Dfa, n: &Nfa) -> bool {
    let k = d.n_symbols();
    let finals = n.finals().iter().fold(0u64, |m, &q| m | 1 << q);
    let succ: Vec<Vec<u64>> = (0..n.n_states() as u32)
        .map(|q| {
            (0..k as Symbol)
                .map(|a| n.successors(q, a).iter().fold(0u64, |m, &t| m | 1 << t))
                .collect()
        })
        .collect();
    let step = |s: u64, a: Symbol| {
        let mut out = 0u64;
        let mut rest = s;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            out |= succ[q][a as usize];
            rest &= rest - 1;
        }
        out
    };
    let start = (d.initial(), n.initial().iter().fold(0u64, |m, &q| m | 1 << q));
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some((p, s)) = stack.pop() {
        if d.is_final(p) && s & finals == 0 {
            return false;
        }
        for a in 0..k as Symbol {
            let next = (d.next(p, a), step(s, a));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    true
}

/// A search for a small family of masks in which every target is the union of the members
/// it contains. Targets are fixed ones plus those induced by chosen members.
pub(crate) trait CoverProblem {
    fn base_targets(&self) -> &[u64];
    fn derived_targets(&self, _member: u64, _out: &mut Vec<u64>) {}
    /// Upper estimate of the number of candidates for a pair, used to pick the branching pair.
    fn candidate_count(&self, target: u64, atom: u32) -> u64;
    /// Members `c` with `atom ∈ c ⊆ target`.
    fn candidates(&self, target: u64, atom: u32, out: &mut Vec<u64>);
    /// Members to add when everything is covered but the family is rejected.
    fn extensions(&self, _family: &[u64], _out: &mut Vec<u64>) {}
    fn accept(&self, _family: &[u64]) -> bool {
        true
    }
}

/// Family of at most `k` members solving `p`, found by branching on the uncovered
/// (target, atom) pair with the fewest candidates. Complete: every solution containing the
/// current family contains one of the branches.
pub(crate) fn cover_search<P: CoverProblem>(p: &P, k: usize, meter: &mut Meter) -> Result<Option<Vec<u64>>> {
    let mut memo = HashSet::new();
    let mut family = Vec::new();
    go(p, k, meter, &mut memo, &mut family)
}

fn go<P: CoverProblem>(
    p: &P,
    k: usize,
    meter: &mut Meter,
    memo: &mut HashSet<Vec<u64>>,
    family: &mut Vec<u64>,
) -> Result<Option<Vec<u64>>> {
    meter.tick(1)?;
    if memo.len() < MEMO_CAP && !memo.insert(family.clone()) {
        return Ok(None);
    }
    let mut targets: Vec<u64> = p.base_targets().to_vec();
    for &m in family.iter() {
        p.derived_targets(m, &mut targets);
    }
    let mut best: Option<(u64, u64, u32)> = None;
    for &t in &targets {
        let covered = family.iter().filter(|&&m| m & !t == 0).fold(0, |acc, &m| acc | m);
        let rest = t & !covered;
        if rest != 0 {
            if family.len() == k {
                return Ok(None);
            }
            let x = rest.trailing_zeros();
            let count = p.candidate_count(t, x);
            if best.is_none_or(|(c, _, _)| count < c) {
                best = Some((count, t, x));
            }
        }
    }
    let mut branches = Vec::new();
    match best {
        None => {
            if p.accept(family) {
                return Ok(Some(family.clone()));
            }
            if family.len() == k {
                return Ok(None);
            }
            p.extensions(family, &mut branches);
        }
        Some((count, t, x)) => {
            // each candidate is a node to visit; never materialize more than the budget
            meter.ensure(count)?;
            p.candidates(t, x, &mut branches)
        }
    }
    for c in branches {
        let pos = match family.binary_search(&c) {
            Ok(_) => continue,
            Err(pos) => pos,
        };
        family.insert(pos, c);
        let found = go(p, k, meter, memo, family)?;
        family.remove(pos);
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Candidates drawn from an explicit list.
pub(crate) struct ListProblem<'a, F: Fn(&[u64]) -> bool> {
    pub targets: Vec<u64>,
    pub pool: &'a [u64],
    pub accept: F,
    /// Whether rejected but covering families may grow by arbitrary pool members.
    pub extend: bool,
}

impl<F: Fn(&[u64]) -> bool> CoverProblem for ListProblem<'_, F> {
    fn base_targets(&self) -> &[u64] {
        &self.targets
    }

    fn candidate_count(&self, target: u64, atom: u32) -> u64 {
        self.pool
            .iter()
            .filter(|&&c| c >> atom & 1 == 1 && c & !target == 0)
            .count() as u64
    }

    fn candidates(&self, target: u64, atom: u32, out: &mut Vec<u64>) {
        out.extend(
            self.pool
                .iter()
                .copied()
                .filter(|&c| c >> atom & 1 == 1 && c & !target == 0),
        );
    }

    fn extensions(&self, family: &[u64], out: &mut Vec<u64>) {
        if self.extend {
            out.extend(self.pool.iter().copied().filter(|c| !family.contains(c)));
        }
    }

    fn accept(&self, family: &[u64]) -> bool {
        (self.accept)(family)
    }
}

/// State languages of an nfa closed under the derivative structure of `coords`: `L` and
/// every `a⁻¹K` for a member `K` must be unions of members. Candidates are all masks.
pub(crate) struct FamilyProblem<'a> {
    pub coords: &'a Coords,
    pub targets: Vec<u64>,
}

impl<'a> FamilyProblem<'a> {
    pub fn new(coords: &'a Coords) -> Self {
        let targets = if coords.language == 0 {
            vec![]
        } else {
            vec![coords.language]
        };
        FamilyProblem { coords, targets }
    }
}

impl CoverProblem for FamilyProblem<'_> {
    fn base_targets(&self) -> &[u64] {
        &self.targets
    }

    fn derived_targets(&self, member: u64, out: &mut Vec<u64>) {
        for a in 0..self.coords.n_symbols as Symbol {
            let d = self.coords.derivative(member, a);
            if d != 0 && !out.contains(&d) {
                out.push(d);
            }
        }
    }

    fn candidate_count(&self, target: u64, _atom: u32) -> u64 {
        1u64 << (target.count_ones() - 1).min(63)
    }

    fn candidates(&self, target: u64, atom: u32, out: &mut Vec<u64>) {
        let bit = 1u64 << atom;
        let rest = target & !bit;
        let mut s = rest;
        loop {
            out.push(s | bit);
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::budget::SearchBudget;

    #[test]
    fn intersection_closure_of_chain_and_antichain() {
        assert_eq!(
            intersection_closure(&[0b011, 0b110, 0], 100).unwrap(),
            vec![0b010, 0b011, 0b110]
        );
        assert_eq!(intersection_closure(&[0b001, 0b010], 100).unwrap(), vec![0b001, 0b010]);
        assert!(intersection_closure(&[0b011, 0b110, 0b101], 2).is_err());
    }

    /// Set basis by brute force over all families of masks.
    #[test]
    fn cover_search_matches_brute_force_set_basis() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..60 {
            let ground = rng.gen_range(1..=4);
            let full = (1u64 << ground) - 1;
            let rows: Vec<u64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=full)).collect();
            let pool = intersection_closure(&rows, 1000).unwrap();
            let brute = (0..=rows.len())
                .find(|&k| {
                    (1..=full).combinations_of(k).any(|fam| {
                        rows.iter()
                            .all(|&r| fam.iter().filter(|&&b| b & !r == 0).fold(0, |a, &b| a | b) == r)
                    })
                })
                .unwrap();
            let p = ListProblem {
                targets: rows.clone(),
                pool: &pool,
                accept: |_: &[u64]| true,
                extend: false,
            };
            let got = (0..=rows.len())
                .find(|&k| {
                    cover_search(&p, k, &mut SearchBudget::default().meter())
                        .unwrap()
                        .is_some()
                })
                .unwrap();
            assert_eq!(got, brute, "rows {rows:?}");
        }
    }

    trait Combos {
        fn combinations_of(self, k: usize) -> Box<dyn Iterator<Item = Vec<u64>>>;
    }

    impl Combos for std::ops::RangeInclusive<u64> {
        fn combinations_of(self, k: usize) -> Box<dyn Iterator<Item = Vec<u64>>> {
            use itertools::Itertools;
            Box::new(self.combinations(k))
        }
    }

    #[test]
    fn maximal_nfa_accepts_language_for_derivative_family() {
        let a = crate::lang_core::Alphabet::new(["a", "b"]).unwrap();
        let l = LanguageHandle::from_regex(&crate::lang_core::parse_regex("(a+b)*a(a+b)", &a).unwrap(), 2);
        let c = Coords::left(&l).unwrap();
        let mut ders: Vec<u64> = c.derivatives.iter().copied().filter(|&d| d != 0).collect();
        ders.sort();
        ders.dedup();
        let n = c.maximal_nfa(&ders);
        assert_eq!(n.language(), l);
        assert!(dfa_included(l.dfa(), &n));
    }
}
