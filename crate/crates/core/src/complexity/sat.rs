use varisat::{ExtendFormula, Lit, Solver};

use crate::error::{Error, Result};
use crate::jsl_automata::AtomSpace;
use crate::lang_core::{Nfa, Symbol};

/// Acceptor of `L` with at most `k` states whose state languages are unions of atoms of `sp`.
///
/// One variable per (state, atom) says the atom lies in the state language. The constraints
/// say the atom of `a·w` is in `q` iff some `a`-successor of `q` has the atom of `w`, and
/// the atom of the empty word is in `q` iff `q` is final. By induction on word length every
/// model is an nfa whose state languages are exactly the chosen unions of atoms.
pub(crate) fn atom_acceptor(sp: &AtomSpace, k: usize) -> Result<Option<Nfa>> {
    let (n, sigma) = (sp.n_atoms(), sp.n_symbols());
    let mut s = Solver::new();
    let trans: Vec<Vec<Vec<Lit>>> = (0..k)
        .map(|_| (0..sigma).map(|_| (0..k).map(|_| s.new_lit()).collect()).collect())
        .collect();
    let init: Vec<Lit> = (0..k).map(|_| s.new_lit()).collect();
    let fin: Vec<Lit> = (0..k).map(|_| s.new_lit()).collect();
    let member: Vec<Vec<Lit>> = (0..k).map(|_| (0..n).map(|_| s.new_lit()).collect()).collect();
    let eps = sp.eps() as usize;

    for q in 0..k {
        s.add_clause(&[!member[q][eps], fin[q]]);
        s.add_clause(&[member[q][eps], !fin[q]]);
        for a in 0..sigma {
            for m in 0..n {
                let am = sp.act(a as Symbol, m as u32) as usize;
                // member[q][am] ⟺ ∨_p (trans[q][a][p] ∧ member[p][m])
                let mut any = vec![!member[q][am]];
                for p in 0..k {
                    let y = s.new_lit();
                    s.add_clause(&[!y, trans[q][a][p]]);
                    s.add_clause(&[!y, member[p][m]]);
                    s.add_clause(&[y, !trans[q][a][p], !member[p][m]]);
                    s.add_clause(&[!y, member[q][am]]);
                    any.push(y);
                }
                s.add_clause(&any);
            }
        }
    }
    let lang = sp.language();
    for m in 0..n {
        if lang.contains(m) {
            let mut any = Vec::with_capacity(k);
            for q in 0..k {
                let z = s.new_lit();
                s.add_clause(&[!z, init[q]]);
                s.add_clause(&[!z, member[q][m]]);
                any.push(z);
            }
            s.add_clause(&any);
        } else {
            for q in 0..k {
                s.add_clause(&[!init[q], !member[q][m]]);
            }
        }
    }

    let sat = s.solve().map_err(|e| Error::Precondition(format!("sat solver: {e}")))?;
    if !sat {
        return Ok(None);
    }
    let model: std::collections::HashSet<Lit> = s.model().unwrap_or_default().into_iter().collect();
    let on = |l: Lit| model.contains(&l);
    let mut nfa = Nfa::new(sigma, k);
    for q in 0..k {
        for a in 0..sigma {
            for p in 0..k {
                if on(trans[q][a][p]) {
                    nfa.add_transition(q as u32, a as Symbol, p as u32);
                }
            }
        }
    }
    nfa.set_initial((0..k as u32).filter(|&q| on(init[q as usize])));
    nfa.set_final((0..k as u32).filter(|&q| on(fin[q as usize])));
    Ok(Some(nfa.normalized()))
}
