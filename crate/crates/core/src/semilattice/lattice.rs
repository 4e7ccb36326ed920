use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::bits;
use crate::error::{Error, Result};

/// Largest element count for which the order matrices are materialized.
pub const MAX_ELEMENTS: usize = 1 << 12;

/// Explicit finite join-semilattice on elements `0..n`.
///
/// The order is stored as up- and down-sets. A linear extension (`by_rank`) lets
/// joins and meets be read off as the first or last common bound in rank order.
#[derive(Clone, Debug)]
pub struct FiniteSemilattice {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    up_ranked: Vec<FixedBitSet>,
    down_ranked: Vec<FixedBitSet>,
    by_rank: Vec<u32>,
    /// `by_rank` runs from the top down.
    descending: bool,
    bottom: usize,
    top: usize,
    labels: Option<Labels>,
    irreducibles: OnceLock<Vec<usize>>,
}

#[derive(Clone, Debug)]
struct Labels {
    ground: usize,
    sets: Vec<FixedBitSet>,
}

/// Order-theoretic summary of a finite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub is_distributive: bool,
    pub is_boolean: bool,
    pub length: usize,
    pub is_extremal: bool,
}

impl FiniteSemilattice {
    /// Builds from up-sets (`up[x]` = elements above `x`) and checks every axiom.
    pub fn from_up_sets(up: Vec<FixedBitSet>) -> Result<Self> {
        let n = up.len();
        if n == 0 {
            return Err(Error::Precondition("a semilattice has at least a bottom".into()));
        }
        for (x, ux) in up.iter().enumerate() {
            if ux.len() != n || !ux.contains(x) {
                return Err(Error::Precondition(format!("order not reflexive at {x}")));
            }
            for y in ux.ones() {
                if y != x && up[y].contains(x) {
                    return Err(Error::Precondition(format!("order not antisymmetric at {x},{y}")));
                }
                if !up[y].is_subset(ux) {
                    return Err(Error::Precondition(format!("order not transitive at {x},{y}")));
                }
            }
        }
        for x in 0..n {
            for y in 0..x {
                let common = bits::intersection(&up[x], &up[y]);
                if !common.ones().any(|z| up[z] == common) {
                    return Err(Error::Precondition(format!("no join of {x} and {y}")));
                }
            }
        }
        let s = Self::from_up_sets_unchecked(up, None);
        if (0..n).any(|x| !s.up[s.bottom].contains(x)) {
            return Err(Error::Precondition("no bottom element".into()));
        }
        Ok(s)
    }

    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::from_up_sets((0..n).map(|x| bits::bitset(n, (0..n).filter(|&y| leq(x, y)))).collect())
    }

    fn from_up_sets_unchecked(up: Vec<FixedBitSet>, labels: Option<Labels>) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, ux) in up.iter().enumerate() {
            for y in ux.ones() {
                down[y].insert(x);
            }
        }
        let mut by_rank: Vec<u32> = (0..n as u32).collect();
        by_rank.sort_by_key(|&x| (down[x as usize].count_ones(..), x));
        let mut rank = vec![0usize; n];
        for (r, &x) in by_rank.iter().enumerate() {
            rank[x as usize] = r;
        }
        let ranked = |sets: &[FixedBitSet]| -> Vec<FixedBitSet> {
            sets.iter()
                .map(|s| bits::bitset(n, s.ones().map(|y| rank[y])))
                .collect()
        };
        let up_ranked = ranked(&up);
        let down_ranked = ranked(&down);
        let bottom = by_rank[0] as usize;
        let top = by_rank[n - 1] as usize;
        FiniteSemilattice {
            up,
            down,
            up_ranked,
            down_ranked,
            by_rank,
            descending: false,
            bottom,
            top,
            labels,
            irreducibles: OnceLock::new(),
        }
    }

    /// All unions of the generators (the empty union included), ordered by cardinality then members.
    pub fn from_union_closure(ground: usize, generators: &[FixedBitSet], budget: usize) -> Result<Self> {
        let budget = budget.min(MAX_ELEMENTS);
        let mut seen: HashMap<FixedBitSet, ()> = HashMap::new();
        let empty = FixedBitSet::with_capacity(ground);
        seen.insert(empty.clone(), ());
        let mut elems = vec![empty];
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                assert_eq!(g.len(), ground, "generator over a different ground set");
                let u = bits::union(&elems[i], g);
                if !seen.contains_key(&u) {
                    if elems.len() >= budget {
                        return Err(Error::budget("union closure", budget));
                    }
                    seen.insert(u.clone(), ());
                    elems.push(u);
                }
            }
            i += 1;
        }
        elems.sort_by(bits::cmp_card_lex);
        Ok(Self::from_labels_unchecked(ground, elems))
    }

    /// Semilattice of a union-closed family containing ∅, ordered by inclusion.
    pub fn from_labels(ground: usize, sets: Vec<FixedBitSet>) -> Result<Self> {
        if sets.len() > MAX_ELEMENTS {
            return Err(Error::budget("semilattice elements", MAX_ELEMENTS));
        }
        let index: HashMap<&FixedBitSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        if index.len() != sets.len() {
            return Err(Error::Precondition("duplicate labels".into()));
        }
        if !index.contains_key(&FixedBitSet::with_capacity(ground)) {
            return Err(Error::Precondition("family lacks the empty set".into()));
        }
        for x in &sets {
            for y in &sets {
                if !index.contains_key(&bits::union(x, y)) {
                    return Err(Error::Precondition("family not closed under union".into()));
                }
            }
        }
        Ok(Self::from_labels_unchecked(ground, sets))
    }

    fn from_labels_unchecked(ground: usize, sets: Vec<FixedBitSet>) -> Self {
        let n = sets.len();
        let up = sets
            .iter()
            .map(|x| bits::bitset(n, (0..n).filter(|&y| x.is_subset(&sets[y]))))
            .collect();
        Self::from_up_sets_unchecked(up, Some(Labels { ground, sets }))
    }

    /// The powerset of `{0..k}` with element index = bitmask.
    pub fn powerset(k: usize) -> Result<Self> {
        if k >= 63 || 1usize << k > MAX_ELEMENTS {
            return Err(Error::budget("powerset elements", MAX_ELEMENTS));
        }
        let sets = (0..1usize << k)
            .map(|m| bits::bitset(k, (0..k).filter(|&i| m >> i & 1 == 1)))
            .collect();
        Ok(Self::from_labels_unchecked(k, sets))
    }

    /// Chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_up_sets_unchecked((0..n).map(|x| bits::bitset(n, x..n)).collect(), None)
    }

    /// Componentwise order on pairs; element `(x, y)` has index `x * |b| + y`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.len(), b.len());
        let n = na * nb;
        let up = (0..n)
            .map(|p| {
                let (x, y) = (p / nb, p % nb);
                bits::bitset(
                    n,
                    a.up[x].ones().flat_map(|x2| b.up[y].ones().map(move |y2| x2 * nb + y2)),
                )
            })
            .collect();
        Self::from_up_sets_unchecked(up, None)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        if self.leq(x, y) {
            return y;
        }
        if self.leq(y, x) {
            return x;
        }
        let mut common = self.up_ranked[x].intersection(&self.up_ranked[y]);
        let r = if self.descending {
            common.next_back()
        } else {
            common.next()
        };
        self.by_rank[r.expect("finite semilattice has a top")] as usize
    }

    /// Greatest lower bound; exists because the order is finite with a bottom.
    pub fn meet(&self, x: usize, y: usize) -> usize {
        if self.leq(x, y) {
            return x;
        }
        if self.leq(y, x) {
            return y;
        }
        let mut common = self.down_ranked[x].intersection(&self.down_ranked[y]);
        let r = if self.descending {
            common.next()
        } else {
            common.next_back()
        };
        self.by_rank[r.expect("bottom is a common lower bound")] as usize
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Elements listed so that every element precedes its strict upper bounds.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.by_rank.iter().map(|&x| x as usize).collect();
        if self.descending {
            v.reverse();
        }
        v
    }

    pub fn label(&self, x: usize) -> Option<&FixedBitSet> {
        self.labels.as_ref().map(|l| &l.sets[x])
    }

    pub fn ground_size(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| l.ground)
    }

    /// Element carrying exactly the given label.
    pub fn element_with_label(&self, set: &FixedBitSet) -> Option<usize> {
        self.labels.as_ref()?.sets.iter().position(|s| s == set)
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        if x == self.bottom {
            return false;
        }
        let below = self.down[x].ones().filter(|&y| y != x);
        self.join_all(below) != x
    }

    /// Join-irreducible elements in increasing index order; never contains the bottom.
    pub fn join_irreducibles(&self) -> &[usize] {
        self.irreducibles
            .get_or_init(|| (0..self.len()).filter(|&x| self.is_join_irreducible(x)).collect())
    }

    pub fn meet_irreducibles(&self) -> Vec<usize> {
        self.dual().join_irreducibles().to_vec()
    }

    /// Join-irreducibles below `x`.
    pub fn irreducibles_below(&self, x: usize) -> Vec<usize> {
        self.join_irreducibles()
            .iter()
            .copied()
            .filter(|&j| self.leq(j, x))
            .collect()
    }

    /// Same elements with the order reversed; `dual(dual(s))` is `s` on the same indices.
    pub fn dual(&self) -> Self {
        FiniteSemilattice {
            up: self.down.clone(),
            down: self.up.clone(),
            up_ranked: self.down_ranked.clone(),
            down_ranked: self.up_ranked.clone(),
            by_rank: self.by_rank.clone(),
            descending: !self.descending,
            bottom: self.top,
            top: self.bottom,
            labels: None,
            irreducibles: OnceLock::new(),
        }
    }

    /// One prime filter `{x : x ≰ s₀}` per co-point `s₀`; `s₀ = top` gives the empty filter.
    pub fn prime_filters(&self) -> Vec<(FixedBitSet, usize)> {
        (0..self.len())
            .map(|s0| (bits::complement(&self.down[s0]), s0))
            .collect()
    }

    /// Number of steps in a longest strict chain.
    pub fn length(&self) -> usize {
        let mut height = vec![0usize; self.len()];
        for x in self.linear_extension() {
            height[x] = self.down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| height[y] + 1)
                .max()
                .unwrap_or(0);
        }
        height[self.top]
    }

    /// Distributive iff every join-irreducible is join-prime.
    pub fn is_distributive(&self) -> bool {
        self.join_irreducibles().iter().all(|&j| {
            let rest = self.join_all((0..self.len()).filter(|&x| !self.leq(j, x)));
            !self.leq(j, rest)
        })
    }

    pub fn predicates(&self) -> Predicates {
        let n_irr = self.join_irreducibles().len();
        let is_distributive = self.is_distributive();
        let length = self.length();
        Predicates {
            is_distributive,
            is_boolean: is_distributive && n_irr < 63 && self.len() == 1usize << n_irr,
            length,
            is_extremal: length == n_irr,
        }
    }

    /// `{n, leq, irreducibles, labels?}` with `leq` as one 0/1 string per row.
    pub fn to_json(&self) -> Value {
        let n = self.len();
        let leq: Vec<String> = (0..n)
            .map(|x| (0..n).map(|y| if self.leq(x, y) { '1' } else { '0' }).collect())
            .collect();
        let mut v = json!({
            "n": n,
            "leq": leq,
            "irreducibles": self.join_irreducibles(),
        });
        if let Some(l) = &self.labels {
            v["labels"] = l.sets.iter().map(bits::ones).collect::<Vec<_>>().into();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        bits::bitset(n, xs.iter().copied())
    }

    pub(crate) fn m3_closure() -> FiniteSemilattice {
        let g = [set(3, &[0, 1]), set(3, &[0, 2]), set(3, &[1, 2])];
        FiniteSemilattice::from_union_closure(3, &g, 100).unwrap()
    }

    /// Irreducibility by brute force over all subsets of strict predecessors.
    fn brute_irreducibles(s: &FiniteSemilattice) -> Vec<usize> {
        (0..s.len())
            .filter(|&x| {
                let below: Vec<usize> = (0..s.len()).filter(|&y| y != x && s.leq(y, x)).collect();
                (0..1u64 << below.len()).all(|m| {
                    let pick = below
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 == 1)
                        .map(|(_, &y)| y);
                    s.join_all(pick) != x
                })
            })
            .collect()
    }

    fn brute_distributive(s: &FiniteSemilattice) -> bool {
        let n = s.len();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| s.meet(x, s.join(y, z)) == s.join(s.meet(x, y), s.meet(x, z)))))
    }

    #[test]
    fn empty_family_gives_single_element() {
        let s = FiniteSemilattice::from_union_closure(2, &[], 10).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.join_irreducibles().is_empty());
        assert_eq!(s.prime_filters().len(), 1);
        assert_eq!(s.prime_filters()[0].0.count_ones(..), 0);
    }

    #[test]
    fn m3_family() {
        let s = m3_closure();
        assert_eq!(s.len(), 5);
        assert_eq!(s.join_irreducibles(), &[1, 2, 3]);
        assert_eq!(brute_irreducibles(&s), vec![1, 2, 3]);
        assert!(!s.is_distributive());
        assert!(!brute_distributive(&s));
        assert_eq!(s.length(), 2);
        assert!(!s.predicates().is_extremal);
        assert_eq!(s.meet_irreducibles(), vec![1, 2, 3]);
    }

    #[test]
    fn chain_and_powerset() {
        let c = FiniteSemilattice::chain(2);
        assert_eq!(c.join_irreducibles(), &[1]);
        assert_eq!(c.meet_irreducibles(), vec![0]);
        assert_eq!(c.prime_filters().len(), 2);
        let p = FiniteSemilattice::powerset(3).unwrap();
        assert_eq!(p.join_irreducibles(), &[1, 2, 4]);
        assert_eq!(p.meet_irreducibles(), vec![3, 5, 6]);
        let pr = p.predicates();
        assert!(pr.is_boolean && pr.is_distributive && pr.is_extremal);
        assert_eq!(pr.length, 3);
        let c5 = FiniteSemilattice::chain(5);
        let pc = c5.predicates();
        assert!(pc.is_distributive && pc.is_extremal && !pc.is_boolean);
        assert_eq!(pc.length, c5.join_irreducibles().len());
    }

    #[test]
    fn prime_filters_of_square_match_enumeration() {
        let p = FiniteSemilattice::powerset(2).unwrap();
        let filters = p.prime_filters();
        assert_eq!(filters.len(), 4);
        // upward-closed, join-prime subsets by direct enumeration
        let mut count = 0;
        for m in 0..16usize {
            let inside = |x: usize| m >> x & 1 == 1;
            let up_closed = (0..4).all(|x| !inside(x) || (0..4).all(|y| !p.leq(x, y) || inside(y)));
            let prime = (0..4).all(|x| (0..4).all(|y| inside(p.join(x, y)) == (inside(x) || inside(y))));
            let bottom_out = !inside(p.bottom());
            if up_closed && prime && bottom_out {
                count += 1;
                assert!(filters.iter().any(|(f, _)| (0..4).all(|x| f.contains(x) == inside(x))));
            }
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn dual_swaps_and_involutes() {
        let s = m3_closure();
        let d = s.dual();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(s.leq(x, y), d.leq(y, x));
                assert_eq!(d.join(x, y), s.meet(x, y));
            }
        }
        let dd = d.dual();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(dd.join(x, y), s.join(x, y));
            }
        }
    }

    #[test]
    fn from_leq_rejects_non_lattices() {
        // two incomparable maximal elements without a top
        let r = FiniteSemilattice::from_leq(3, |x, y| x == y || x == 0);
        assert!(r.is_err());
        assert!(FiniteSemilattice::from_leq(2, |_, _| true).is_err());
    }

    #[test]
    fn union_closure_budget() {
        let gens: Vec<FixedBitSet> = (0..8).map(|i| set(8, &[i])).collect();
        assert!(FiniteSemilattice::from_union_closure(8, &gens, 100)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn product_of_chains_is_distributive() {
        let s = FiniteSemilattice::product(&FiniteSemilattice::chain(3), &FiniteSemilattice::chain(2));
        assert_eq!(s.len(), 6);
        assert!(s.is_distributive() && brute_distributive(&s));
        assert_eq!(s.join_irreducibles().len(), 3);
        assert_eq!(brute_irreducibles(&s).len(), 3);
    }

    #[test]
    fn json_shape() {
        let v = FiniteSemilattice::chain(2).to_json();
        assert_eq!(v["n"], 2);
        assert_eq!(v["leq"][0], "11");
        assert!(v.get("labels").is_none());
    }
}
