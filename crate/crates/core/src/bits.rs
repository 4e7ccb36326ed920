//! Small helpers over [`FixedBitSet`].

use fixedbitset::FixedBitSet;

pub fn bitset(len: usize, ones: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(len);
    for i in ones {
        b.insert(i);
    }
    b
}

pub fn full(len: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(len);
    b.insert_range(..);
    b
}

pub fn complement(b: &FixedBitSet) -> FixedBitSet {
    let mut c = b.clone();
    c.toggle_range(..);
    c
}

pub fn union(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut c = a.clone();
    c.union_with(b);
    c
}

pub fn intersection(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut c = a.clone();
    c.intersect_with(b);
    c
}

pub fn ones(b: &FixedBitSet) -> Vec<usize> {
    b.ones().collect()
}

/// Total order: by cardinality, then by the sorted list of members.
pub fn cmp_card_lex(a: &FixedBitSet, b: &FixedBitSet) -> std::cmp::Ordering {
    a.count_ones(..)
        .cmp(&b.count_ones(..))
        .then_with(|| a.ones().cmp(b.ones()))
}

/// Renders as `{0,2,5}`.
pub fn fmt_set(b: &FixedBitSet) -> String {
    let items: Vec<String> = b.ones().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}
