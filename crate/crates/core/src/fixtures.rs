//! Embedded example languages and automata, validated when loaded.

use crate::error::{Error, Result};
use crate::lang_core::{as_dfa, parse_aut, parse_regex, Alphabet, Dfa, LanguageHandle, Nfa};

/// A named example: its language, an optional acceptor and transcribed minimal dfas.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub alphabet: Alphabet,
    pub language: LanguageHandle,
    /// Acceptor shown with the example, if any.
    pub nfa: Option<Nfa>,
    /// Transcribed minimal dfas of the language and of its reverse, if drawn.
    pub min_dfa: Option<Dfa>,
    pub min_dfa_rev: Option<Dfa>,
    /// Regex the language was built from, if any.
    pub regex: Option<String>,
}

pub const NAMES: &[&str] = &[
    "F_LN0", "F_LN1", "F_LN2", "F_LN3", "F_LN4", "F_M3", "F_SUB", "F_U5", "F_AA",
];

/// Four-state nfa of the subatomic-but-not-atomic example.
///
/// The drawing's arrows between states 1 and 3 carry the labels in the other direction;
/// the transcription below is the reading under which both drawn minimal dfas are correct.
const SUB_NFA: &str = "\
alphabet a b
states 4
initial 0
final 2
0 a 1
0 b 1 2
1 a 3
1 b 3 0
2 a 0 2 3
3 a 3
3 b 1
";

/// Figure minDfa(L), states 0-8.
const SUB_MIN: &str = "\
alphabet a b
states 9
initial 0
final 2 5 7
0 a 1
0 b 2
1 a 3
1 b 4
2 a 5
2 b 4
3 a 3
3 b 1
4 a 6
4 b 2
5 a 7
5 b 2
6 a 3
6 b 8
7 a 7
7 b 7
8 a 6
8 b 7
";

/// Figure minDfa(rev L), states 0-5.
const SUB_MIN_REV: &str = "\
alphabet a b
states 6
initial 0
final 1 3 5
0 a 0
0 b 1
1 a 0
1 b 2
2 a 1
2 b 3
3 a 4
3 b 2
4 a 5
4 b 5
5 a 5
5 b 5
";

/// Five-state nfa for `{a^n : n ≠ 5}`: a 3-cycle and a 2-cycle joined by one edge.
/// States 0 and 4 are initial; 0, 1 and 4 are final.
const U5_NFA: &str = "\
alphabet a
states 5
initial 0 4
final 0 1 4
0 a 1
1 a 2
2 a 0 3
3 a 4
4 a 3
";

fn regex_language(re: &str, alphabet: &Alphabet) -> Result<LanguageHandle> {
    Ok(LanguageHandle::from_regex(&parse_regex(re, alphabet)?, alphabet.len()))
}

/// `(0+1)* 1 (0+1)^n` over `{0,1}`.
pub fn shift_regex(n: usize) -> String {
    format!("(0+1)*1{}", "(0+1)".repeat(n))
}

fn check(cond: bool, name: &str, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Automaton(format!("fixture {name}: {what}")))
    }
}

fn dfa_of(text: &str) -> Result<(Alphabet, Dfa)> {
    let (alphabet, nfa) = parse_aut(text)?;
    let dfa = as_dfa(&nfa).ok_or_else(|| Error::Automaton("transcription is not deterministic".into()))?;
    Ok((alphabet, dfa))
}

/// Loads and validates a fixture by name.
pub fn load(name: &str) -> Result<Fixture> {
    let fixture = match name {
        _ if name.starts_with("F_LN") => {
            let n: usize = name[4..]
                .parse()
                .map_err(|_| Error::Precondition(format!("unknown fixture {name}")))?;
            if n > 4 {
                return Err(Error::Precondition(format!("unknown fixture {name}")));
            }
            let alphabet = Alphabet::new(["0", "1"])?;
            let re = shift_regex(n);
            let language = regex_language(&re, &alphabet)?;
            check(
                language.n_states() == 1 << (n + 1),
                name,
                "minimal dfa is not of size 2^(n+1)",
            )?;
            Fixture {
                name: name.into(),
                alphabet,
                language,
                nfa: None,
                min_dfa: None,
                min_dfa_rev: None,
                regex: Some(re),
            }
        }
        "F_M3" => {
            let alphabet = Alphabet::new(["a1", "a2", "a3"])?;
            let re = "a1(a2+a3)+a2(a1+a3)+a3(a1+a2)";
            let language = regex_language(re, &alphabet)?;
            check(language.n_states() == 6, name, "minimal dfa does not have 6 states")?;
            Fixture {
                name: name.into(),
                alphabet,
                language,
                nfa: None,
                min_dfa: None,
                min_dfa_rev: None,
                regex: Some(re.into()),
            }
        }
        "F_SUB" => {
            let (alphabet, nfa) = parse_aut(SUB_NFA)?;
            let (_, min) = dfa_of(SUB_MIN)?;
            let (_, min_rev) = dfa_of(SUB_MIN_REV)?;
            let language = nfa.language();
            check(
                min.is_minimal() && min.n_states() == 9,
                name,
                "minDfa(L) figure is not a 9-state minimal dfa",
            )?;
            check(
                min_rev.is_minimal() && min_rev.n_states() == 6,
                name,
                "minDfa(rev L) figure is not a 6-state minimal dfa",
            )?;
            check(
                LanguageHandle::from_dfa(&min) == language,
                name,
                "minDfa(L) figure disagrees with N",
            )?;
            check(
                LanguageHandle::from_dfa(&min_rev) == language.reverse(),
                name,
                "minDfa(rev L) figure disagrees with rev N",
            )?;
            Fixture {
                name: name.into(),
                alphabet,
                language,
                nfa: Some(nfa),
                min_dfa: Some(min),
                min_dfa_rev: Some(min_rev),
                regex: None,
            }
        }
        "F_U5" => {
            let (alphabet, nfa) = parse_aut(U5_NFA)?;
            let re = "@+a+aa+aaa+aaaa+aaaaaa(a)*";
            let language = regex_language(re, &alphabet)?;
            check(nfa.language() == language, name, "nfa does not accept {a^n : n != 5}")?;
            check(language.n_states() == 7, name, "minimal dfa does not have 7 states")?;
            Fixture {
                name: name.into(),
                alphabet,
                language,
                nfa: Some(nfa),
                min_dfa: None,
                min_dfa_rev: None,
                regex: Some(re.into()),
            }
        }
        "F_AA" => {
            let alphabet = Alphabet::unary("a");
            let re = "a+aa";
            let language = regex_language(re, &alphabet)?;
            Fixture {
                name: name.into(),
                alphabet,
                language,
                nfa: None,
                min_dfa: None,
                min_dfa_rev: None,
                regex: Some(re.into()),
            }
        }
        _ => return Err(Error::Precondition(format!("unknown fixture {name}"))),
    };
    Ok(fixture)
}

/// Every fixture, in [`NAMES`] order.
pub fn load_all() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| load(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::all_words;
    use crate::monoids::{transition_monoid, MONOID_BUDGET};

    #[test]
    fn all_fixtures_load() {
        let all = load_all().unwrap();
        assert_eq!(all.len(), NAMES.len());
        assert!(load("F_LN5").is_err());
        assert!(load("nope").is_err());
    }

    #[test]
    fn unary_fixture_by_enumeration() {
        let f = load("F_U5").unwrap();
        for w in all_words(1, 20) {
            assert_eq!(f.language.contains(&w), w.len() != 5);
        }
    }

    /// The transcription reproduces both drawn dfas up to isomorphism. The drawn dfas fix the
    /// monoid size at 56; the nfa's reverse determinizes to a 64-element transition monoid.
    #[test]
    fn subatomic_example_reproduces_figures() {
        let f = load("F_SUB").unwrap();
        let n = f.nfa.as_ref().unwrap();
        let det = n.rsc().minimize();
        assert!(det
            .to_nfa()
            .isomorphism(&f.min_dfa.as_ref().unwrap().to_nfa())
            .is_some());
        let rev = n.reverse().rsc();
        assert!(rev
            .minimize()
            .to_nfa()
            .isomorphism(&f.min_dfa_rev.as_ref().unwrap().to_nfa())
            .is_some());
        assert_eq!(transition_monoid(&rev, MONOID_BUDGET).unwrap().len(), 64);
        assert_eq!(
            transition_monoid(f.min_dfa_rev.as_ref().unwrap(), MONOID_BUDGET)
                .unwrap()
                .len(),
            56
        );
    }

    #[test]
    fn shift_family_sizes() {
        for n in 0..=4 {
            let f = load(&format!("F_LN{n}")).unwrap();
            for w in all_words(2, 6) {
                let expected = w.len() > n && w[w.len() - 1 - n] == 1;
                assert_eq!(f.language.contains(&w), expected);
            }
        }
    }
}
