//! Transition and syntactic monoids, and their actions on semilattices of languages.

mod monoid;
mod representation;

pub use monoid::{
    monoid_quotient_compare, syntactic_monoid, transition_monoid, FiniteMonoid, QuotientRelation, MONOID_BUDGET,
};
pub use representation::{
    canonical_free, canonical_representation, is_equivariant, lift_to_unary, BooleanRepresentation, UnaryLift,
};
