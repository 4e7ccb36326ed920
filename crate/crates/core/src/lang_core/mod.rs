//! Regular-language values: alphabets, regexes, automata and canonical language handles.

mod alphabet;
mod aut_format;
mod dfa;
mod handle;
mod nfa;
mod regex;

pub use alphabet::{Alphabet, Symbol};
pub use aut_format::{as_dfa, parse_aut, print_aut, print_dfa};
pub use dfa::Dfa;
pub use handle::{all_words, LanguageHandle, Side};
pub use nfa::Nfa;
pub use regex::{parse_regex, Regex};
