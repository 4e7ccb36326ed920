//! Line-based automaton text format.
//!
//! ```text
//! # comment
//! alphabet a b
//! states 3
//! initial 0
//! final 2
//! 0 a 1 2
//! 1 b 2
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::alphabet::{Alphabet, Symbol};
use super::dfa::Dfa;
use super::nfa::Nfa;

pub fn parse_aut(text: &str) -> Result<(Alphabet, Nfa)> {
    let mut alphabet: Option<Alphabet> = None;
    let mut n_states: Option<usize> = None;
    let mut initial: Option<Vec<u32>> = None;
    let mut finals: Vec<u32> = Vec::new();
    let mut edges: Vec<(usize, u32, Symbol, Vec<u32>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Automaton(format!("line {}: {msg}", lineno + 1));
        let mut words = line.split_whitespace();
        let head = words.next().expect("non-empty line");
        let rest: Vec<&str> = words.collect();
        let states = |xs: &[&str]| -> Result<Vec<u32>> {
            xs.iter()
                .map(|x| x.parse::<u32>().map_err(|_| err(format!("bad state `{x}`"))))
                .collect()
        };
        match head {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err("duplicate alphabet line".into()));
                }
                alphabet = Some(Alphabet::new(rest.iter().copied())?);
            }
            "states" => {
                let [n] = rest[..] else {
                    return Err(err("`states` takes one count".into()));
                };
                n_states = Some(n.parse().map_err(|_| err(format!("bad count `{n}`")))?);
            }
            "initial" => initial = Some(states(&rest)?),
            "final" => finals.extend(states(&rest)?),
            src => {
                let src: u32 = src.parse().map_err(|_| err(format!("unknown directive `{src}`")))?;
                let Some(sigma) = &alphabet else {
                    return Err(err("transition before alphabet".into()));
                };
                let Some((sym, dsts)) = rest.split_first() else {
                    return Err(err("transition needs a symbol".into()));
                };
                let a = sigma
                    .index_of(sym)
                    .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
                if dsts.is_empty() {
                    return Err(err("transition needs a target".into()));
                }
                edges.push((lineno + 1, src, a, states(dsts)?));
            }
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::Automaton("missing `alphabet` line".into()))?;
    let n = n_states.ok_or_else(|| Error::Automaton("missing `states` line".into()))?;
    let initial = initial.ok_or_else(|| Error::Automaton("missing `initial` line".into()))?;
    let check = |s: u32, line: usize| {
        if (s as usize) < n {
            Ok(())
        } else {
            Err(Error::Automaton(format!("line {line}: state {s} out of range")))
        }
    };
    let mut nfa = Nfa::new(alphabet.len(), n);
    for &s in initial.iter().chain(&finals) {
        check(s, 0)?;
    }
    for (line, src, a, dsts) in edges {
        check(src, line)?;
        for t in dsts {
            check(t, line)?;
            nfa.add_transition(src, a, t);
        }
    }
    nfa.set_initial(initial);
    nfa.set_final(finals);
    Ok((alphabet, nfa))
}

/// Interprets a parsed automaton as a dfa when it is total and deterministic.
pub fn as_dfa(nfa: &Nfa) -> Option<Dfa> {
    if !nfa.is_deterministic() {
        return None;
    }
    let k = nfa.n_symbols();
    let mut trans = Vec::with_capacity(nfa.n_states() * k);
    for s in 0..nfa.n_states() as u32 {
        for a in 0..k as Symbol {
            trans.push(nfa.successors(s, a)[0]);
        }
    }
    let finals = (0..nfa.n_states() as u32).map(|s| nfa.is_final(s)).collect();
    Some(Dfa::from_parts(k, trans, nfa.initial()[0], finals))
}

pub fn print_aut(alphabet: &Alphabet, nfa: &Nfa) -> String {
    let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    writeln!(out, "alphabet {}", alphabet.symbols().join(" ")).unwrap();
    writeln!(out, "states {}", nfa.n_states()).unwrap();
    writeln!(out, "initial {}", join(nfa.initial()).trim_end()).unwrap();
    writeln!(out, "final {}", join(nfa.finals()).trim_end()).unwrap();
    for s in 0..nfa.n_states() as u32 {
        for a in 0..nfa.n_symbols() as Symbol {
            let succ = nfa.successors(s, a);
            if !succ.is_empty() {
                writeln!(out, "{s} {} {}", alphabet.name(a), join(succ)).unwrap();
            }
        }
    }
    out
}

pub fn print_dfa(alphabet: &Alphabet, dfa: &Dfa) -> String {
    print_aut(alphabet, &dfa.to_nfa())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# two a's\nalphabet a\nstates 3\ninitial 0\nfinal 2\n0 a 1\n1 a 2\n";

    #[test]
    fn parse_and_print_round_trip() {
        let (s, n) = parse_aut(SAMPLE).unwrap();
        assert!(n.accepts(&[0, 0]) && !n.accepts(&[0]));
        let again = parse_aut(&print_aut(&s, &n)).unwrap();
        assert_eq!(again, (s, n));
    }

    #[test]
    fn dfa_detection() {
        let (_, n) = parse_aut(SAMPLE).unwrap();
        assert!(as_dfa(&n).is_none());
        let (_, d) = parse_aut("alphabet a\nstates 2\ninitial 0\nfinal 1\n0 a 1\n1 a 0\n").unwrap();
        let d = as_dfa(&d).unwrap();
        assert!(d.accepts(&[0]) && !d.accepts(&[0, 0]));
    }

    #[test]
    fn errors() {
        assert!(parse_aut("states 1\ninitial 0\n").is_err());
        assert!(parse_aut("alphabet a\nstates 1\ninitial 3\n").is_err());
        assert!(matches!(
            parse_aut("alphabet a\nstates 1\ninitial 0\n0 b 0\n"),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(parse_aut("alphabet a\nstates 1\ninitial 0\nfoo\n").is_err());
    }

    #[test]
    fn zero_state_automaton() {
        let (s, n) = parse_aut("alphabet a b\nstates 0\ninitial\nfinal\n").unwrap();
        assert_eq!(n.n_states(), 0);
        assert_eq!(parse_aut(&print_aut(&s, &n)).unwrap().1, n);
    }
}
