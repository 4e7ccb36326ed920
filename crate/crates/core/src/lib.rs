//! Algebraic invariants of regular languages: semilattices of quotients, dual
//! automata, syntactic monoids and the state-complexity measures built on them.

// states, symbols and atoms index several parallel tables at once
#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod complexity;
pub mod error;
pub mod fixtures;
pub mod jsl_automata;
pub mod lang_core;
pub mod monoids;
pub mod sampling;
pub mod semilattice;
pub mod verify;

pub use error::{Error, Result};
pub use lang_core::{Alphabet, Dfa, LanguageHandle, Nfa, Regex, Symbol};
