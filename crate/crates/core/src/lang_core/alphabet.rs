use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol within its [`Alphabet`].
pub type Symbol = u8;

/// Ordered, duplicate-free list of symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub const MAX_SYMBOLS: usize = 26;

    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Alphabet("alphabet must not be empty".into()));
        }
        if symbols.len() > Self::MAX_SYMBOLS {
            return Err(Error::Alphabet(format!(
                "{} symbols exceed the limit of {}",
                symbols.len(),
                Self::MAX_SYMBOLS
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Alphabet(format!("invalid symbol name `{s}`")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::Alphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Parses a comma or whitespace separated list such as `"0,1"` or `"a1 a2 a3"`.
    pub fn parse_list(text: &str) -> Result<Self> {
        Self::new(
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty()),
        )
    }

    /// Single-character symbols occurring in a regex, in sorted order.
    pub fn infer_from_regex(text: &str) -> Result<Self> {
        let mut chars: Vec<char> = text.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        chars.sort_unstable();
        chars.dedup();
        if chars.is_empty() {
            chars.push('a');
        }
        Self::new(chars.into_iter().map(String::from))
    }

    pub fn unary(name: &str) -> Self {
        Alphabet {
            symbols: vec![name.to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, a: Symbol) -> &str {
        &self.symbols[a as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name).map(|i| i as Symbol)
    }

    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Longest symbol name that is a prefix of `text`.
    pub(crate) fn longest_match(&self, text: &str) -> Option<(Symbol, usize)> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| text.starts_with(s.as_str()))
            .max_by_key(|(_, s)| s.len())
            .map(|(i, s)| (i as Symbol, s.len()))
    }

    /// Parses a word; `@`, `ε` or the empty string denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        let text = text.trim();
        if text.is_empty() || text == "@" || text == "ε" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let c = rest.chars().next().expect("non-empty");
            if c.is_whitespace() || c == '.' {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            match self.longest_match(rest) {
                Some((a, len)) => {
                    out.push(a);
                    rest = &rest[len..];
                }
                None => return Err(Error::UnknownSymbol(rest.chars().take(1).collect())),
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.is_single_char() { "" } else { "." };
        w.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new((0..27).map(|i| format!("s{i}"))).is_err());
        assert!(Alphabet::new(["a+"]).is_err());
    }

    #[test]
    fn words_round_trip() {
        let s = Alphabet::parse_list("a1,a2,a3").unwrap();
        let w = s.parse_word("a1a3a2").unwrap();
        assert_eq!(w, vec![0, 2, 1]);
        assert_eq!(s.format_word(&w), "a1.a3.a2");
        assert_eq!(s.parse_word("a1.a3.a2").unwrap(), w);
        assert_eq!(s.parse_word("@").unwrap(), Vec::<Symbol>::new());
    }

    #[test]
    fn infers_sorted_single_chars() {
        let s = Alphabet::infer_from_regex("(b+a)*1").unwrap();
        assert_eq!(s.symbols(), ["1", "a", "b"]);
    }
}
