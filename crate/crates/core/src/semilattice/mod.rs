//! Finite join-semilattices, their morphisms, adjoints and isomorphisms.

mod iso;
mod lattice;
mod morphism;

pub use iso::{is_isomorphism, iso_search, ISO_BUDGET};
pub use lattice::{FiniteSemilattice, Predicates, MAX_ELEMENTS};
pub use morphism::JslMorphism;

use fixedbitset::FixedBitSet;

/// Members of a family that are not the union of the members strictly below them.
///
/// These are exactly the join-irreducibles of the union closure of the family.
pub fn union_irreducibles(family: &[FixedBitSet]) -> Vec<usize> {
    (0..family.len())
        .filter(|&i| {
            let x = &family[i];
            if x.count_ones(..) == 0 {
                return false;
            }
            let mut acc = FixedBitSet::with_capacity(x.len());
            for y in family {
                if y.is_subset(x) && y != x {
                    acc.union_with(y);
                }
            }
            &acc != x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bitset;

    #[test]
    fn union_irreducibles_match_closure() {
        let fam = vec![
            bitset(4, [0]),
            bitset(4, [1]),
            bitset(4, [0, 1]),
            bitset(4, [0, 1, 2]),
            bitset(4, []),
        ];
        assert_eq!(union_irreducibles(&fam), vec![0, 1, 3]);
        let s = FiniteSemilattice::from_union_closure(4, &fam, 100).unwrap();
        assert_eq!(s.join_irreducibles().len(), 3);
    }
}
