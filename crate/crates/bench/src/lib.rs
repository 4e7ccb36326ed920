//! Inputs shared by the benches.

use nsc_core::lang_core::parse_regex;
use nsc_core::{Alphabet, LanguageHandle};

/// Words over {0, 1} whose `n`-th letter from the end is 1: ns is `n + 1`.
pub fn shift_language(n: usize) -> LanguageHandle {
    let a = Alphabet::new(["0", "1"]).expect("two distinct symbols");
    let re = format!("(0+1)*1{}", "(0+1)".repeat(n));
    LanguageHandle::from_regex(&parse_regex(&re, &a).expect("well-formed regex"), 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_language_has_two_to_the_n_plus_one_derivatives() {
        assert_eq!(shift_language(3).n_states(), 16);
    }
}
