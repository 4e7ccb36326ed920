use std::sync::Arc;

use crate::error::{Error, Result};

use super::lattice::FiniteSemilattice;

/// Join- and bottom-preserving map between finite semilattices, stored as a table.
#[derive(Clone, Debug)]
pub struct JslMorphism {
    dom: Arc<FiniteSemilattice>,
    cod: Arc<FiniteSemilattice>,
    map: Vec<u32>,
}

impl JslMorphism {
    pub fn new(dom: Arc<FiniteSemilattice>, cod: Arc<FiniteSemilattice>, map: Vec<u32>) -> Result<Self> {
        let f = Self::new_unchecked(dom, cod, map);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(dom: Arc<FiniteSemilattice>, cod: Arc<FiniteSemilattice>, map: Vec<u32>) -> Self {
        assert_eq!(map.len(), dom.len());
        JslMorphism { dom, cod, map }
    }

    pub fn identity(s: Arc<FiniteSemilattice>) -> Self {
        let map = (0..s.len() as u32).collect();
        JslMorphism {
            dom: s.clone(),
            cod: s,
            map,
        }
    }

    pub fn dom(&self) -> &Arc<FiniteSemilattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteSemilattice> {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// Checks bottom and all binary joins.
    pub fn validate(&self) -> Result<()> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.map.iter().any(|&y| y as usize >= c.len()) {
            return Err(Error::Precondition("morphism maps outside its codomain".into()));
        }
        if self.apply(d.bottom()) != c.bottom() {
            return Err(Error::Precondition("morphism does not preserve the bottom".into()));
        }
        for x in 0..d.len() {
            for y in 0..x {
                if self.apply(d.join(x, y)) != c.join(self.apply(x), self.apply(y)) {
                    return Err(Error::Precondition(format!("morphism does not preserve {x} ∨ {y}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &JslMorphism) -> JslMorphism {
        assert_eq!(self.cod.len(), other.dom.len());
        JslMorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&y| other.map[y as usize]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut hit = vec![false; self.cod.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y as usize], true))
    }

    /// Adjoint into freshly built duals.
    pub fn adjoint(&self) -> JslMorphism {
        self.adjoint_between(Arc::new(self.cod.dual()), Arc::new(self.dom.dual()))
    }

    /// Maps `t` to the largest `s` with `f(s) ≤ t`, as a morphism `cod^op → dom^op`.
    ///
    /// `dual_cod` and `dual_dom` must be the duals of the codomain and domain.
    pub fn adjoint_between(&self, dual_cod: Arc<FiniteSemilattice>, dual_dom: Arc<FiniteSemilattice>) -> JslMorphism {
        assert_eq!(dual_cod.len(), self.cod.len());
        assert_eq!(dual_dom.len(), self.dom.len());
        let (d, c) = (&*self.dom, &*self.cod);
        let irr = d.join_irreducibles();
        let map = (0..c.len())
            .map(|t| {
                let below = irr.iter().copied().filter(|&j| c.leq(self.apply(j), t));
                d.join_all(below) as u32
            })
            .collect();
        JslMorphism {
            dom: dual_cod,
            cod: dual_dom,
            map,
        }
    }

    /// Whether `f(s) ≤ t ⟺ s ≤ g(t)` for all `s, t`, with `g` read in the original orders.
    pub fn is_adjoint_pair(&self, g: &JslMorphism) -> bool {
        let (d, c) = (&*self.dom, &*self.cod);
        (0..d.len()).all(|s| (0..c.len()).all(|t| c.leq(self.apply(s), t) == d.leq(s, g.apply(t))))
    }
}

impl PartialEq for JslMorphism {
    /// Tables compared; semilattices are assumed to match.
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arc(s: FiniteSemilattice) -> Arc<FiniteSemilattice> {
        Arc::new(s)
    }

    /// Extends random irreducible images by joins, retrying until the result preserves joins.
    fn random_morphism(rng: &mut ChaCha8Rng, d: &Arc<FiniteSemilattice>, c: &Arc<FiniteSemilattice>) -> JslMorphism {
        let irr = d.join_irreducibles().to_vec();
        loop {
            let images: Vec<usize> = irr.iter().map(|_| rng.gen_range(0..c.len())).collect();
            let map = (0..d.len())
                .map(|x| c.join_all(irr.iter().zip(&images).filter(|(&j, _)| d.leq(j, x)).map(|(_, &y)| y)) as u32)
                .collect();
            let f = JslMorphism::new_unchecked(d.clone(), c.clone(), map);
            if f.is_valid() {
                return f;
            }
        }
    }

    fn small_lattices() -> Vec<Arc<FiniteSemilattice>> {
        let m3 = FiniteSemilattice::from_union_closure(
            3,
            &[
                crate::bits::bitset(3, [0, 1]),
                crate::bits::bitset(3, [0, 2]),
                crate::bits::bitset(3, [1, 2]),
            ],
            10,
        )
        .unwrap();
        vec![
            arc(FiniteSemilattice::chain(1)),
            arc(FiniteSemilattice::chain(3)),
            arc(FiniteSemilattice::powerset(2).unwrap()),
            arc(m3),
            arc(FiniteSemilattice::product(
                &FiniteSemilattice::chain(2),
                &FiniteSemilattice::chain(3),
            )),
        ]
    }

    #[test]
    fn identity_is_self_adjoint() {
        for s in small_lattices() {
            let id = JslMorphism::identity(s.clone());
            let adj = id.adjoint();
            assert_eq!(adj.table(), id.table());
        }
    }

    #[test]
    fn two_into_square() {
        let two = arc(FiniteSemilattice::chain(2));
        let sq = arc(FiniteSemilattice::powerset(2).unwrap());
        let f = JslMorphism::new(two, sq, vec![0, 3]).unwrap();
        let adj = f.adjoint();
        // t ↦ 1 iff {1,2} ⊆ t
        assert_eq!(adj.table(), &[0, 0, 0, 1]);
        assert!(f.is_adjoint_pair(&adj));
        assert!(adj.is_valid());
    }

    #[test]
    fn adjoint_is_involution_and_reverses_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ls = small_lattices();
        for _ in 0..300 {
            let a = &ls[rng.gen_range(0..ls.len())];
            let b = &ls[rng.gen_range(0..ls.len())];
            let c = &ls[rng.gen_range(0..ls.len())];
            let f = random_morphism(&mut rng, a, b);
            let g = random_morphism(&mut rng, b, c);
            let fa = f.adjoint();
            assert!(fa.is_valid());
            assert!(f.is_adjoint_pair(&fa));
            assert_eq!(fa.adjoint().table(), f.table());
            let lhs = f.then(&g).adjoint();
            let rhs = g.adjoint().then(&fa);
            assert_eq!(lhs.table(), rhs.table());
        }
    }
}
