use std::sync::Arc;

use crate::error::{Error, Result};

use super::lattice::FiniteSemilattice;
use super::morphism::JslMorphism;

/// Default node budget for isomorphism search.
pub const ISO_BUDGET: u64 = 10_000_000;

/// Join-preserving bijection `a → b`, if one exists.
///
/// An isomorphism is determined by its restriction to the join-irreducibles, so only
/// those are assigned; candidates must agree on a per-element signature and on the
/// order among already assigned irreducibles.
pub fn iso_search(a: &Arc<FiniteSemilattice>, b: &Arc<FiniteSemilattice>, budget: u64) -> Result<Option<JslMorphism>> {
    let (ja, jb) = (a.join_irreducibles(), b.join_irreducibles());
    if a.len() != b.len() || ja.len() != jb.len() {
        return Ok(None);
    }
    let ma = a.meet_irreducibles();
    let mb = b.meet_irreducibles();
    if ma.len() != mb.len() {
        return Ok(None);
    }
    let sig = |s: &FiniteSemilattice, m: &[usize], x: usize| {
        (
            s.up_set(x).count_ones(..),
            s.down_set(x).count_ones(..),
            m.contains(&x),
            s.irreducibles_below(x).len(),
        )
    };
    let sa: Vec<_> = ja.iter().map(|&x| sig(a, &ma, x)).collect();
    let sb: Vec<_> = jb.iter().map(|&x| sig(b, &mb, x)).collect();
    let mut pa = sa.clone();
    let mut pb = sb.clone();
    pa.sort();
    pb.sort();
    if pa != pb {
        return Ok(None);
    }
    let mut search = Search {
        a,
        b,
        ja,
        jb,
        sa: &sa,
        sb: &sb,
        assign: vec![usize::MAX; ja.len()],
        used: vec![false; jb.len()],
        nodes: 0,
        budget,
    };
    search.run(0)
}

struct Search<'a> {
    a: &'a Arc<FiniteSemilattice>,
    b: &'a Arc<FiniteSemilattice>,
    ja: &'a [usize],
    jb: &'a [usize],
    sa: &'a [(usize, usize, bool, usize)],
    sb: &'a [(usize, usize, bool, usize)],
    assign: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> Result<Option<JslMorphism>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::budget("isomorphism search nodes", self.budget));
        }
        if i == self.ja.len() {
            return Ok(self.extend());
        }
        for t in 0..self.jb.len() {
            if self.used[t] || self.sa[i] != self.sb[t] {
                continue;
            }
            let consistent = (0..i).all(|k| {
                let (x, y) = (self.ja[i], self.ja[k]);
                let (fx, fy) = (self.jb[t], self.jb[self.assign[k]]);
                self.a.leq(x, y) == self.b.leq(fx, fy) && self.a.leq(y, x) == self.b.leq(fy, fx)
            });
            if !consistent {
                continue;
            }
            self.assign[i] = t;
            self.used[t] = true;
            if let Some(f) = self.run(i + 1)? {
                return Ok(Some(f));
            }
            self.used[t] = false;
        }
        self.assign[i] = usize::MAX;
        Ok(None)
    }

    /// Extends the irreducible assignment by joins and checks it is an order isomorphism.
    fn extend(&self) -> Option<JslMorphism> {
        let (a, b) = (&**self.a, &**self.b);
        let map: Vec<u32> = (0..a.len())
            .map(|x| {
                let imgs = (0..self.ja.len())
                    .filter(|&k| a.leq(self.ja[k], x))
                    .map(|k| self.jb[self.assign[k]]);
                b.join_all(imgs) as u32
            })
            .collect();
        let f = JslMorphism::new_unchecked(self.a.clone(), self.b.clone(), map);
        if !f.is_bijective() {
            return None;
        }
        let order_iso = (0..a.len()).all(|x| {
            let image_up = crate::bits::bitset(b.len(), a.up_set(x).ones().map(|y| f.apply(y)));
            &image_up == b.up_set(f.apply(x))
        });
        order_iso.then_some(f)
    }
}

/// Whether `f` is a bijection that preserves and reflects the order.
pub fn is_isomorphism(f: &JslMorphism) -> bool {
    let (a, b) = (f.dom(), f.cod());
    f.is_bijective() && (0..a.len()).all(|x| (0..a.len()).all(|y| a.leq(x, y) == b.leq(f.apply(x), f.apply(y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitset;

    fn arc(s: FiniteSemilattice) -> Arc<FiniteSemilattice> {
        Arc::new(s)
    }

    fn m3() -> FiniteSemilattice {
        FiniteSemilattice::from_union_closure(3, &[bitset(3, [0, 1]), bitset(3, [0, 2]), bitset(3, [1, 2])], 10)
            .unwrap()
    }

    /// Brute-force over all bijections.
    fn brute_iso(a: &FiniteSemilattice, b: &FiniteSemilattice) -> bool {
        fn go(
            i: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            a: &FiniteSemilattice,
            b: &FiniteSemilattice,
        ) -> bool {
            let n = a.len();
            if i == n {
                return (0..n).all(|x| (0..n).all(|y| a.leq(x, y) == b.leq(perm[x], perm[y])));
            }
            for t in 0..n {
                if !used[t] {
                    used[t] = true;
                    perm.push(t);
                    if go(i + 1, perm, used, a, b) {
                        return true;
                    }
                    perm.pop();
                    used[t] = false;
                }
            }
            false
        }
        a.len() == b.len() && go(0, &mut Vec::new(), &mut vec![false; a.len()], a, b)
    }

    #[test]
    fn identity_found() {
        let s = arc(m3());
        let f = iso_search(&s, &s, ISO_BUDGET).unwrap().unwrap();
        assert!(is_isomorphism(&f));
    }

    #[test]
    fn square_is_not_a_chain() {
        let a = arc(FiniteSemilattice::powerset(2).unwrap());
        let b = arc(FiniteSemilattice::chain(4));
        assert!(iso_search(&a, &b, ISO_BUDGET).unwrap().is_none());
    }

    #[test]
    fn m3_is_self_dual_and_cube_too() {
        let s = m3();
        let d = s.dual();
        assert!(brute_iso(&s, &d));
        assert!(iso_search(&arc(s), &arc(d), ISO_BUDGET).unwrap().is_some());
        let p = FiniteSemilattice::powerset(3).unwrap();
        let f = iso_search(&arc(p.clone()), &arc(p.dual()), ISO_BUDGET)
            .unwrap()
            .unwrap();
        assert!(is_isomorphism(&f));
    }

    #[test]
    fn agrees_with_brute_force_on_small_products() {
        let c2 = FiniteSemilattice::chain(2);
        let c3 = FiniteSemilattice::chain(3);
        let candidates = vec![
            FiniteSemilattice::product(&c2, &c3),
            FiniteSemilattice::product(&c3, &c2),
            FiniteSemilattice::chain(6),
            FiniteSemilattice::product(&m3(), &FiniteSemilattice::chain(1)),
        ];
        for x in &candidates {
            for y in &candidates {
                let found = iso_search(&arc(x.clone()), &arc(y.clone()), ISO_BUDGET).unwrap();
                assert_eq!(found.is_some(), brute_iso(x, y));
                if let Some(f) = found {
                    assert!(is_isomorphism(&f));
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = arc(FiniteSemilattice::powerset(3).unwrap());
        assert!(iso_search(&p, &p, 1).unwrap_err().is_budget());
    }
}
