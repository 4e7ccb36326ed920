use crate::error::{Error, Result};

use super::alphabet::{Alphabet, Symbol};
use super::nfa::Nfa;

/// Regular expression over alphabet indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Symbol(Symbol),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(l: Regex, r: Regex) -> Regex {
        Regex::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Regex, r: Regex) -> Regex {
        Regex::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(e: Regex) -> Regex {
        Regex::Star(Box::new(e))
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        match self {
            Regex::Empty | Regex::Epsilon => None,
            Regex::Symbol(a) => Some(*a),
            Regex::Union(l, r) | Regex::Concat(l, r) => l.max_symbol().max(r.max_symbol()),
            Regex::Star(e) => e.max_symbol(),
        }
    }

    pub fn to_string_with(&self, alphabet: &Alphabet) -> String {
        fn go(r: &Regex, s: &Alphabet, prec: u8, out: &mut String) {
            match r {
                Regex::Empty => out.push('#'),
                Regex::Epsilon => out.push('@'),
                Regex::Symbol(a) => out.push_str(s.name(*a)),
                Regex::Union(l, r) => {
                    if prec > 0 {
                        out.push('(');
                    }
                    go(l, s, 0, out);
                    out.push('+');
                    go(r, s, 0, out);
                    if prec > 0 {
                        out.push(')');
                    }
                }
                Regex::Concat(l, r) => {
                    if prec > 1 {
                        out.push('(');
                    }
                    go(l, s, 1, out);
                    if !s.is_single_char() {
                        out.push(' ');
                    }
                    go(r, s, 1, out);
                    if prec > 1 {
                        out.push(')');
                    }
                }
                Regex::Star(e) => {
                    go(e, s, 2, out);
                    out.push('*');
                }
            }
        }
        let mut out = String::new();
        go(self, alphabet, 0, &mut out);
        out
    }

    /// Glushkov position automaton; the empty language yields the 0-state nfa.
    pub fn to_nfa(&self, n_symbols: usize) -> Nfa {
        let mut positions: Vec<Symbol> = Vec::new();
        let mut follow: Vec<Vec<u32>> = Vec::new();
        let info = glushkov(self, &mut positions, &mut follow);
        let n = positions.len() + 1;
        let mut nfa = Nfa::new(n_symbols, n);
        for &p in &info.first {
            nfa.add_transition(0, positions[p as usize - 1], p);
        }
        for (i, fs) in follow.iter().enumerate() {
            let src = i as u32 + 1;
            for &q in fs {
                nfa.add_transition(src, positions[q as usize - 1], q);
            }
        }
        nfa.set_initial([0]);
        let mut finals = info.last.clone();
        if info.nullable {
            finals.push(0);
        }
        nfa.set_final(finals);
        let nfa = nfa.normalized();
        if nfa.trim_to_useful().n_states() == 0 {
            Nfa::new(n_symbols, 0)
        } else {
            nfa
        }
    }
}

struct GInfo {
    nullable: bool,
    first: Vec<u32>,
    last: Vec<u32>,
}

fn glushkov(r: &Regex, positions: &mut Vec<Symbol>, follow: &mut Vec<Vec<u32>>) -> GInfo {
    match r {
        Regex::Empty => GInfo {
            nullable: false,
            first: vec![],
            last: vec![],
        },
        Regex::Epsilon => GInfo {
            nullable: true,
            first: vec![],
            last: vec![],
        },
        Regex::Symbol(a) => {
            positions.push(*a);
            follow.push(Vec::new());
            let p = positions.len() as u32;
            GInfo {
                nullable: false,
                first: vec![p],
                last: vec![p],
            }
        }
        Regex::Union(l, r) => {
            let a = glushkov(l, positions, follow);
            let b = glushkov(r, positions, follow);
            GInfo {
                nullable: a.nullable || b.nullable,
                first: [a.first, b.first].concat(),
                last: [a.last, b.last].concat(),
            }
        }
        Regex::Concat(l, r) => {
            let a = glushkov(l, positions, follow);
            let b = glushkov(r, positions, follow);
            for &p in &a.last {
                follow[p as usize - 1].extend_from_slice(&b.first);
            }
            let first = if a.nullable {
                [a.first, b.first.clone()].concat()
            } else {
                a.first
            };
            let last = if b.nullable { [a.last, b.last].concat() } else { b.last };
            GInfo {
                nullable: a.nullable && b.nullable,
                first,
                last,
            }
        }
        Regex::Star(e) => {
            let a = glushkov(e, positions, follow);
            for &p in &a.last {
                follow[p as usize - 1].extend_from_slice(&a.first);
            }
            GInfo {
                nullable: true,
                first: a.first,
                last: a.last,
            }
        }
    }
}

/// Parses `+` (union), juxtaposition (concatenation), postfix `*`, `@` (ε), `#` (∅) and parentheses.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex> {
    let mut p = Parser { text, pos: 0, alphabet };
    let r = p.union()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(r)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.text[..self.pos].chars().count(),
            msg: msg.to_string(),
        }
    }

    fn union(&mut self) -> Result<Regex> {
        let mut acc = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                let rhs = self.concat()?;
                acc = Regex::union(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut acc: Option<Regex> = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some(')') => break,
                _ => {
                    let f = self.starred()?;
                    acc = Some(match acc {
                        None => f,
                        Some(a) => Regex::concat(a, f),
                    });
                }
            }
        }
        acc.ok_or_else(|| self.error("expected an expression"))
    }

    fn starred(&mut self) -> Result<Regex> {
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                e = Regex::star(e);
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<Regex> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.union()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('@') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some('#') => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                match self.alphabet.longest_match(&self.text[self.pos..]) {
                    Some((a, len)) => {
                        self.pos += len;
                        Ok(Regex::Symbol(a))
                    }
                    None => {
                        let name: String = self.text[self.pos..]
                            .chars()
                            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                            .collect();
                        Err(Error::UnknownSymbol(name))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::Dfa;
    use crate::lang_core::LanguageHandle;

    fn bin() -> Alphabet {
        Alphabet::parse_list("0,1").unwrap()
    }

    #[test]
    fn parses_left_associative_concat() {
        let r = parse_regex("(0+1)*1(0+1)", &bin()).unwrap();
        let u = Regex::union(Regex::Symbol(0), Regex::Symbol(1));
        let expected = Regex::concat(Regex::concat(Regex::star(u.clone()), Regex::Symbol(1)), u);
        assert_eq!(r, expected);
    }

    #[test]
    fn parses_literals_and_multichar_symbols() {
        assert_eq!(parse_regex("@", &bin()).unwrap(), Regex::Epsilon);
        assert_eq!(parse_regex("#", &bin()).unwrap(), Regex::Empty);
        let s = Alphabet::parse_list("a1,a2,a3").unwrap();
        let r = parse_regex("a1(a2+a3)", &s).unwrap();
        assert_eq!(
            r,
            Regex::concat(Regex::Symbol(0), Regex::union(Regex::Symbol(1), Regex::Symbol(2)))
        );
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse_regex("0+", &bin()), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_regex("(0", &bin()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_regex("2", &bin()), Err(Error::UnknownSymbol(s)) if s == "2"));
        assert!(matches!(parse_regex("0)", &bin()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn glushkov_sizes() {
        assert_eq!(Regex::Empty.to_nfa(1).n_states(), 0);
        let a = Regex::Symbol(0).to_nfa(1);
        assert_eq!(a.n_states(), 2);
        assert!(a.accepts(&[0]) && !a.accepts(&[]) && !a.accepts(&[0, 0]));
        assert!(Regex::star(Regex::Empty).to_nfa(1).accepts(&[]));
    }

    #[test]
    fn matches_hand_built_dfa_for_shifted_language() {
        // last-but-one letter is 1: states remember the last two letters
        let mut d = Dfa::new(2, 4, 0);
        for s in 0..4u32 {
            for a in 0..2u32 {
                d.set(s, a as u8, ((s << 1) | a) & 3);
            }
        }
        d.set_final(2, true);
        d.set_final(3, true);
        let r = parse_regex("(0+1)*1(0+1)", &bin()).unwrap();
        assert_eq!(LanguageHandle::from_nfa(&r.to_nfa(2)), LanguageHandle::from_dfa(&d));
    }

    #[test]
    fn printing_round_trips() {
        let s = bin();
        for text in ["(0+1)*1(0+1)", "@+0*", "#", "(01)*+1"] {
            let r = parse_regex(text, &s).unwrap();
            let again = parse_regex(&r.to_string_with(&s), &s).unwrap();
            assert_eq!(
                LanguageHandle::from_nfa(&r.to_nfa(2)),
                LanguageHandle::from_nfa(&again.to_nfa(2))
            );
        }
    }
}
