//! Deterministic automata over finite semilattices and the dualities between them.

mod atoms;
mod constructions;
pub mod duality;
mod jsl_dfa;
mod semiring;

pub use atoms::AtomSpace;
pub use constructions::{
    dual_auto, dual_powerset, irreducible_nfa, minimal_jsl, minimal_jsl_with_atoms, powerset, reachable_part,
    simplification, sub_automaton,
};
pub use jsl_dfa::{
    is_automaton_isomorphism, is_automaton_morphism, joint_language_classes, simple_isomorphism, JslDfa,
};
pub use semiring::{right_derivative_closure, transition_semiring, TransitionSemiring, SEMIRING_BUDGET};

use crate::error::Result;
use crate::lang_core::LanguageHandle;
use crate::monoids::{syntactic_monoid, MONOID_BUDGET};

/// Boolean closure of the left derivatives, with left derivatives as transitions.
pub fn blq(l: &LanguageHandle) -> Result<JslDfa> {
    AtomSpace::left(l).to_jsl_dfa()
}

/// Boolean closure of the two-sided derivatives, with left derivatives as transitions.
pub fn blrq(l: &LanguageHandle) -> Result<JslDfa> {
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    AtomSpace::syntactic(l, &syn).to_jsl_dfa()
}
