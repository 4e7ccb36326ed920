use std::fs;

use nsc_core::fixtures;
use nsc_core::lang_core::{parse_aut, parse_regex};
use nsc_core::{Alphabet, Error, LanguageHandle, Nfa, Result};

/// The language under analysis, with the automaton it was given as when there is one.
pub struct Input {
    pub alphabet: Alphabet,
    pub language: LanguageHandle,
    /// Explicit acceptor: the `.aut` file, the fixture's drawn nfa, or the position
    /// automaton of a regex.
    pub nfa: Nfa,
}

pub struct Source<'a> {
    pub regex: Option<&'a str>,
    pub aut: Option<&'a str>,
    pub fixture: Option<&'a str>,
    pub alphabet: Option<&'a str>,
}

/// Rewrites `X^n` to `n` copies of `X` and `X^*` to `X*`, where `X` is a parenthesized
/// group or the symbol just before the caret: the longest symbol name of `alphabet` that
/// ends there, or a single character when symbols are inferred.
pub fn expand_powers(text: &str, alphabet: Option<&Alphabet>) -> Result<String> {
    let mut out = String::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '^' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let caret = i;
        let syntax = |msg: &str| Error::Syntax {
            pos: caret,
            msg: msg.into(),
        };
        // operand: the suffix of `out` that forms the last group or symbol run
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        let start = if out.ends_with(')') {
            let mut depth = 0;
            let mut start = None;
            for (k, c) in out.char_indices().rev() {
                match c {
                    ')' => depth += 1,
                    '(' => {
                        depth -= 1;
                        if depth == 0 {
                            start = Some(k);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            start.ok_or_else(|| syntax("unbalanced parenthesis before `^`"))?
        } else {
            let run = match alphabet {
                Some(a) => a
                    .symbols()
                    .iter()
                    .filter(|s| out.ends_with(s.as_str()))
                    .map(String::len)
                    .max()
                    .unwrap_or(0),
                None => out
                    .chars()
                    .last()
                    .filter(char::is_ascii_alphanumeric)
                    .map_or(0, char::len_utf8),
            };
            if run == 0 {
                return Err(syntax("`^` needs a symbol or a parenthesized group before it"));
            }
            out.len() - run
        };
        let operand = out[start..].to_string();
        i += 1;
        while i < chars.len() && chars[i] == ' ' {
            i += 1;
        }
        if i < chars.len() && chars[i] == '*' {
            out.push('*');
            i += 1;
            continue;
        }
        let digits: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(syntax("`^` must be followed by a count or `*`"));
        }
        i += digits.len();
        let n: usize = digits.parse().map_err(|_| syntax("count too large"))?;
        out.truncate(start);
        if n == 0 {
            out.push('@');
        } else {
            for _ in 0..n {
                out.push_str(&operand);
            }
        }
    }
    Ok(out)
}

pub fn load(src: &Source) -> Result<Input> {
    let given = [src.regex.is_some(), src.aut.is_some(), src.fixture.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::Precondition(
            "give exactly one of --regex, --aut, --fixture".into(),
        ));
    }
    if let Some(re) = src.regex {
        let given = src.alphabet.map(Alphabet::parse_list).transpose()?;
        let text = expand_powers(re, given.as_ref())?;
        let alphabet = match given {
            Some(a) => a,
            None => Alphabet::infer_from_regex(&text)?,
        };
        let regex = parse_regex(&text, &alphabet)?;
        let nfa = regex.to_nfa(alphabet.len());
        let language = LanguageHandle::from_regex(&regex, alphabet.len());
        return Ok(Input {
            alphabet,
            language,
            nfa,
        });
    }
    if let Some(path) = src.aut {
        let text = fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
        let (alphabet, nfa) = parse_aut(&text)?;
        return Ok(Input {
            alphabet,
            language: nfa.language(),
            nfa,
        });
    }
    let f = fixtures::load(src.fixture.unwrap())?;
    let nfa = match f.nfa {
        Some(n) => n,
        None => f.language.to_nfa(),
    };
    Ok(Input {
        alphabet: f.alphabet,
        language: f.language,
        nfa,
    })
}
