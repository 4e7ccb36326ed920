//! Nondeterministic state complexity and its algebraic bounds.

mod budget;
mod chrobak;
mod dependency;
mod matrix;
mod ns;
mod report;
mod residual;
mod sat;
mod search;
mod subatomic;

pub use budget::SearchBudget;
pub use chrobak::{chrobak_normal_form, chrobak_to_atomic, is_chrobak_normal_form, CNF_CONSTANT};
pub use dependency::{dependency, DependencyRelation};
pub use matrix::{
    bipartite_dimension, bipartite_dimension_by_bicliques, is_upper_unitriangular, maximal_bicliques,
    unitriangularizable, BicliqueCover, BoolMatrix, Dimension,
};
pub use ns::{natomic_search, ns_search, nsyn_search, Bounds};
pub use report::{analyze, bounds_json, ComplexityReport};
pub use residual::{
    canonical_residual, classify, is_maximal_reachability_witness, is_nfa_isomorphism, theta, Classification,
};
pub(crate) use sat::atom_acceptor;
pub use subatomic::{
    atomic_search, is_atomic, is_atomic_by_atoms, is_atomic_by_reverse, is_subatomic, is_subatomic_by_atoms,
    is_subatomic_by_reverse, subatomic_search,
};
