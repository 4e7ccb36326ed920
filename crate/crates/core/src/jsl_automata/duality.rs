//! Checkable forms of the dualities between semilattice automata.
//!
//! Each `check_*` returns `Err(Error::Check)` naming the first violation, and a budget
//! error when an intermediate construction is too large.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::bits;
use crate::error::{Error, Result};
use crate::lang_core::{Dfa, LanguageHandle, Nfa, Symbol};
use crate::monoids::{syntactic_monoid, FiniteMonoid, MONOID_BUDGET};
use crate::semilattice::JslMorphism;

use super::semiring::{right_derivative_family, semiring_tables};
use super::{
    dual_auto, is_automaton_isomorphism, minimal_jsl, powerset, reachable_part, right_derivative_closure,
    simple_isomorphism, simplification, transition_semiring, AtomSpace, JslDfa, SEMIRING_BUDGET,
};

/// Atom counts up to which the boolean algebras are materialized as automata.
pub const MATERIALIZE_ATOMS: usize = 8;

fn fail(msg: impl Into<String>) -> Error {
    Error::Check(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

/// Complement is an isomorphism from the dual of the subset construction of `n` onto the
/// subset construction of its reverse.
pub fn check_nfarev(n: &Nfa) -> Result<()> {
    let d = dual_auto(&powerset(n)?);
    let r = powerset(&n.reverse())?;
    let full = (1u32 << n.n_states()) - 1;
    let f = JslMorphism::new_unchecked(
        d.semilattice().clone(),
        r.semilattice().clone(),
        (0..=full).map(|x| full & !x).collect(),
    );
    ensure(is_automaton_isomorphism(&f, &d, &r), || {
        "complement is not an automaton isomorphism onto the reversed subset construction".into()
    })
}

/// The three basic facts about dual automata:
/// an element `s` of the dual accepts the reverse of what `a` accepts with cofinal `s`;
/// the dual accepts the reverse language;
/// the dual of the reachable part is the simplification of the dual.
pub fn check_astarprops(a: &JslDfa) -> Result<()> {
    let op = dual_auto(a);
    let d = a.to_dfa();
    let s = a.semilattice();
    for x in 0..a.len() {
        let finals = (0..a.len()).map(|y| !s.leq(y, x)).collect();
        let expected = LanguageHandle::from_dfa(&d.with_finals(finals)).reverse();
        ensure(op.state_language(x) == expected, || {
            format!("dual element {x} does not accept the reversed cofinal language")
        })?;
    }
    ensure(op.language() == a.language().reverse(), || {
        "dual does not accept the reverse language".into()
    })?;
    let lhs = dual_auto(&reachable_part(a).0);
    let rhs = simplification(&op).0;
    ensure(simple_isomorphism(&lhs, &rhs).is_some(), || {
        "dual of the reachable part is not the simplification of the dual".into()
    })
}

/// `K ↦ (complement of rev K)⁻¹L`.
pub fn dual_derivative(l: &LanguageHandle, k: &LanguageHandle) -> LanguageHandle {
    l.left_quotient_by_set(&k.reverse().complement())
}

/// The dual of the minimal semilattice automaton of `rev L` is that of `L`, through
/// [`dual_derivative`].
pub fn check_lqdual(l: &LanguageHandle) -> Result<()> {
    let q = minimal_jsl(l)?;
    let qr = minimal_jsl(&l.reverse())?;
    let op = dual_auto(&qr);
    let index: HashMap<&LanguageHandle, usize> = q.state_languages().iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut map = Vec::with_capacity(qr.len());
    for (x, k) in qr.state_languages().iter().enumerate() {
        let image = dual_derivative(l, k);
        ensure(op.state_language(x) == image, || {
            format!("dual element {x} does not accept its dual derivative")
        })?;
        let y = index
            .get(&image)
            .ok_or_else(|| fail(format!("dual derivative of element {x} is not a union of derivatives")))?;
        map.push(*y as u32);
    }
    let f = JslMorphism::new_unchecked(op.semilattice().clone(), q.semilattice().clone(), map);
    ensure(is_automaton_isomorphism(&f, &op, &q), || {
        "dual derivative map is not an automaton isomorphism".into()
    })
}

/// For a finite word set `U`: the dual derivative of `U⁻¹ rev L` is the union of the
/// derivatives of `L` that avoid `rev U`.
pub fn check_drl_formula(l: &LanguageHandle, u: &[Vec<Symbol>]) -> Result<()> {
    let k = l.n_symbols();
    let r = l.reverse();
    let quotient = r.left_quotient_by_set(&LanguageHandle::from_words(k, u));
    let lhs = dual_derivative(l, &quotient);
    let rev_u: Vec<Vec<Symbol>> = u.iter().map(|w| w.iter().rev().copied().collect()).collect();
    let ders = l.derivative_set();
    let rhs = LanguageHandle::union_all(k, ders.iter().filter(|d| rev_u.iter().all(|w| !d.contains(w))));
    ensure(lhs == rhs, || format!("dual derivative formula fails for U = {u:?}"))
}

/// [`check_drl_formula`] over subsets of the access words of `minDfa(rev L)`: all of them
/// when there are at most six words, otherwise those of size at most two plus the whole set.
pub fn check_drl(l: &LanguageHandle) -> Result<()> {
    let words = l.reverse().derivative_words();
    let sizes: Vec<usize> = if words.len() <= 6 {
        (0..=words.len()).collect()
    } else {
        vec![0, 1, 2, words.len()]
    };
    for size in sizes {
        for u in words.iter().cloned().combinations(size) {
            check_drl_formula(l, &u)?;
        }
    }
    Ok(())
}

/// Checks a correspondence `φ` from the states of a dfa `d` onto the atoms of `sp`:
/// bijective, `φ(d.next(p, a)) = act_a(φ(p))`, `p` final iff `φ(p)` lies in the language,
/// and the initial state goes to the atom of `ε`.
fn check_atom_correspondence(d: &Dfa, sp: &AtomSpace, phi: &[u32], what: &str) -> Result<()> {
    ensure(phi.len() == sp.n_atoms() && phi.iter().all_unique(), || {
        format!("{what}: states and atoms are not in bijection")
    })?;
    ensure(phi[d.initial() as usize] == sp.eps(), || {
        format!("{what}: initial state is not the atom of ε")
    })?;
    for p in 0..d.n_states() as u32 {
        ensure(
            d.is_final(p) == sp.language().contains(phi[p as usize] as usize),
            || format!("{what}: finality of state {p} disagrees with its atom"),
        )?;
        for a in 0..d.n_symbols() as Symbol {
            ensure(phi[d.next(p, a) as usize] == sp.act(a, phi[p as usize]), || {
                format!("{what}: transition {p} --{a}--> does not match the atom action")
            })?;
        }
    }
    Ok(())
}

/// With atoms in bijection with states of `d` through `phi`, the dual of the whole boolean
/// algebra is the subset construction of `d` via `X ↦ {p : φ(p) ∉ X}`.
fn check_materialized(sp: &AtomSpace, d: &Dfa, phi: &[u32], what: &str) -> Result<()> {
    let n = sp.n_atoms();
    if n > MATERIALIZE_ATOMS {
        return Ok(());
    }
    let op = dual_auto(&sp.to_jsl_dfa()?);
    let p = powerset(&d.to_nfa())?;
    let map = (0..1u32 << n)
        .map(|x| (0..n).filter(|&q| x >> phi[q] & 1 == 0).fold(0u32, |m, q| m | 1 << q))
        .collect();
    let f = JslMorphism::new_unchecked(op.semilattice().clone(), p.semilattice().clone(), map);
    ensure(is_automaton_isomorphism(&f, &op, &p), || {
        format!("{what}: dual of the boolean algebra is not the subset construction")
    })
}

/// Atoms of the boolean closure of the left derivatives correspond to states of
/// `minDfa(rev L)`: the state reached by `w` goes to the atom of `rev w`.
pub fn check_blqdual(l: &LanguageHandle) -> Result<()> {
    let sp = AtomSpace::left(l);
    let r = l.reverse();
    let d = r.dfa();
    let phi: Vec<u32> = d
        .access_words()
        .into_iter()
        .map(|w| {
            let w = w.expect("minimal dfa is reachable");
            sp.atom_of(&w.iter().rev().copied().collect::<Vec<_>>())
        })
        .collect();
    check_atom_correspondence(d, &sp, &phi, "left atoms")?;
    check_materialized(&sp, d, &phi, "left atoms")
}

/// Atoms of the boolean closure of the two-sided derivatives are the syntactic classes,
/// and correspond to the elements of `Syn(rev L)` viewed as a dfa via `[w] ↦ [rev w]`.
pub fn check_blrqdual(l: &LanguageHandle) -> Result<()> {
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    let r = l.reverse();
    let syn_r = syntactic_monoid(&r, MONOID_BUDGET)?;
    let sp = AtomSpace::syntactic(l, &syn);
    let d = monoid_dfa(&syn_r, &r);
    let phi: Vec<u32> = syn_r
        .witnesses()
        .iter()
        .map(|w| syn.word_class(&w.iter().rev().copied().collect::<Vec<_>>()))
        .collect();
    check_atom_correspondence(&d, &sp, &phi, "syntactic atoms")?;
    check_materialized(&sp, &d, &phi, "syntactic atoms")
}

/// The monoid as a dfa accepting the classes of words in `l`.
fn monoid_dfa(m: &FiniteMonoid, l: &LanguageHandle) -> Dfa {
    m.as_dfa(|x| l.contains(m.witness(x)))
}

/// The dual of the transition semiring of a reachable `a` is the right-derivative closure
/// of the dual of `a`; elements are matched by their languages in transition-monoid
/// coordinates of the dual.
///
/// Semirings over the materialization budget go through [`check_tsdual_by_labels`].
pub fn check_tsdual(a: &JslDfa) -> Result<()> {
    ensure(a.is_reachable(), || "automaton is not reachable".into())?;
    let ts = match transition_semiring(a, SEMIRING_BUDGET) {
        Err(e) if e.is_budget() => return check_tsdual_by_labels(a, LABEL_ROUTE_ELEMENTS),
        r => r?,
    };
    let tsop = dual_auto(ts.automaton());
    let aop = dual_auto(a);
    let (closure, sp) = right_derivative_closure(&aop)?;
    let coords = sp
        .coordinates_of(&tsop.to_dfa())
        .ok_or_else(|| fail("a language of the dual semiring is not a union of dual monoid classes"))?;
    let s = closure.semilattice();
    let map = coords
        .iter()
        .enumerate()
        .map(|(x, k)| {
            s.element_with_label(k).map(|y| y as u32).ok_or_else(|| {
                fail(format!(
                    "dual semiring element {x} is not in the right-derivative closure"
                ))
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    let f = JslMorphism::new_unchecked(tsop.semilattice().clone(), s.clone(), map);
    ensure(is_automaton_isomorphism(&f, &tsop, &closure), || {
        "dual semiring is not isomorphic to the right-derivative closure".into()
    })
}

/// Semiring size up to which the label route runs.
pub const LABEL_ROUTE_ELEMENTS: usize = 1 << 21;

/// [`check_tsdual`] without materializing either order.
///
/// A semiring element `e` is labelled by `λ(e) = {w : δ_{rev w} ≰ e}` in the monoid
/// coordinates of the dual of `a`: the language of `e` as a state of the dual semiring.
/// Checked: `λ(e ∨ δ_w) ⊆ λ(e)` for every `e` and `w`, so λ reverses order; every `e` is
/// the join of the `δ_{rev w}` outside its label, so `λ(f) ⊆ λ(e)` forces `e ≤ f`; the
/// image is exactly the union closure of the right-derivative family, making λ an order
/// isomorphism onto it; the cofinal element goes to the dual language; the image is
/// closed under left derivatives, which the transitions of both sides compute on labels.
pub fn check_tsdual_by_labels(a: &JslDfa, budget: usize) -> Result<()> {
    ensure(a.is_reachable(), || "automaton is not reachable".into())?;
    let s = a.semilattice();
    let ts = semiring_tables(a, budget)?;
    let (family, atoms, tm) = right_derivative_family(&dual_auto(a), budget)?;
    let n = atoms.n_atoms();
    let irr = &ts.irreducibles;

    // maps[x] = δ_{rev w_x}; not_below[k][v]: atoms x with maps[x](j_k) ≰ v
    let maps: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            let rev: Vec<Symbol> = tm.witness(x as u32).iter().rev().copied().collect();
            irr.iter().map(|&j| a.run_from(j, &rev) as u32).collect()
        })
        .collect();
    let mut not_below = vec![vec![FixedBitSet::with_capacity(n); s.len()]; irr.len()];
    for (x, m) in maps.iter().enumerate() {
        for (k, &y) in m.iter().enumerate() {
            for v in 0..s.len() {
                if !s.leq(y as usize, v) {
                    not_below[k][v].insert(x);
                }
            }
        }
    }
    let join = |t: &[u32], u: &[u32]| -> Vec<u32> {
        t.iter()
            .zip(u)
            .map(|(&x, &y)| s.join(x as usize, y as usize) as u32)
            .collect()
    };
    let label = |t: &[u32]| {
        let mut out = FixedBitSet::with_capacity(n);
        for (k, &v) in t.iter().enumerate() {
            out.union_with(&not_below[k][v as usize]);
        }
        out
    };
    let labels: Vec<FixedBitSet> = ts.tables.iter().map(|t| label(t)).collect();
    let index: HashMap<&FixedBitSet, u32> = labels.iter().enumerate().map(|(i, l)| (l, i as u32)).collect();
    ensure(index.len() == labels.len(), || {
        "two semiring elements have the same dual language".into()
    })?;
    ensure(labels.iter().all(|l| l.is_subset(&labels[0])), || {
        "the bottom element is not sent to the top".into()
    })?;

    for (e, t) in ts.tables.iter().enumerate() {
        for w in &ts.words {
            ensure(labels[ts.index[&join(t, w)] as usize].is_subset(&labels[e]), || {
                format!("semiring element {e}: a larger element has a larger label")
            })?;
        }
        let below = (0..n)
            .filter(|&x| !labels[e].contains(x))
            .fold(ts.tables[0].clone(), |acc, x| join(&acc, &maps[x]));
        ensure(below == *t, || {
            format!("semiring element {e} is not the join of the maps outside its label")
        })?;
    }

    let mut closure: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n)];
    let mut seen: HashMap<FixedBitSet, ()> = HashMap::from([(closure[0].clone(), ())]);
    let mut i = 0;
    while i < closure.len() {
        for f in &family {
            let u = bits::union(&closure[i], f);
            if seen.insert(u.clone(), ()).is_none() {
                ensure(index.contains_key(&u), || {
                    "a union of right derivatives is no semiring label".into()
                })?;
                closure.push(u);
            }
        }
        i += 1;
    }
    ensure(closure.len() == labels.len(), || {
        format!(
            "{} semiring elements but {} unions of right derivatives",
            labels.len(),
            closure.len()
        )
    })?;

    let below_init: Vec<usize> = irr
        .iter()
        .enumerate()
        .filter(|(_, &j)| s.leq(j, a.init()))
        .map(|(k, _)| k)
        .collect();
    let is_final = |t: &[u32]| a.is_final(s.join_all(below_init.iter().map(|&k| t[k] as usize)));
    let cofinal = ts
        .tables
        .iter()
        .filter(|t| !is_final(t))
        .fold(ts.tables[0].clone(), |acc, t| join(&acc, t));
    ensure(label(&cofinal) == *atoms.language(), || {
        "the cofinal element does not accept the dual language".into()
    })?;

    for (e, l) in labels.iter().enumerate() {
        for c in 0..a.n_symbols() as Symbol {
            let d = bits::bitset(n, (0..n).filter(|&x| l.contains(atoms.act(c, x as u32) as usize)));
            ensure(index.contains_key(&d), || {
                format!("semiring element {e}: left derivative by {c} has no element")
            })?;
        }
    }
    Ok(())
}

/// Outcome of [`check_all`]: which checks ran and which were skipped on a budget.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityReport {
    pub passed: Vec<&'static str>,
    pub skipped: Vec<&'static str>,
}

/// Runs every check on `n`, on its subset construction and on `L(n)`.
///
/// Budget errors are recorded as skips; any other error is returned.
pub fn check_all(n: &Nfa) -> Result<DualityReport> {
    let mut report = DualityReport::default();
    let l = n.language();
    let p = Arc::new(powerset(n)?);
    let reach = reachable_part(&p).0;
    let q = minimal_jsl(&l)?;
    type Check<'a> = (&'static str, Box<dyn Fn() -> Result<()> + 'a>);
    let checks: Vec<Check> = vec![
        ("nfarev", Box::new(|| check_nfarev(n))),
        ("astarprops/powerset", Box::new(|| check_astarprops(&p))),
        ("astarprops/minimal", Box::new(|| check_astarprops(&q))),
        ("lqdual", Box::new(|| check_lqdual(&l))),
        ("drl", Box::new(|| check_drl(&l))),
        ("blqdual", Box::new(|| check_blqdual(&l))),
        ("blrqdual", Box::new(|| check_blrqdual(&l))),
        ("tsdual/reachable", Box::new(|| check_tsdual(&reach))),
        ("tsdual/minimal", Box::new(|| check_tsdual(&q))),
    ];
    for (name, check) in checks {
        match check() {
            Ok(()) => report.passed.push(name),
            Err(e) if e.is_budget() => report.skipped.push(name),
            Err(Error::Check(msg)) => return Err(fail(format!("{name}: {msg}"))),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::{parse_regex, Alphabet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    fn random_nfa(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> Nfa {
        let n = rng.gen_range(0..=max_states);
        let mut nfa = Nfa::new(k, n);
        for s in 0..n as u32 {
            for a in 0..k as Symbol {
                for t in 0..n as u32 {
                    if rng.gen_bool(0.3) {
                        nfa.add_transition(s, a, t);
                    }
                }
            }
        }
        nfa.set_initial((0..n as u32).filter(|_| rng.gen_bool(0.4)));
        nfa.set_final((0..n as u32).filter(|_| rng.gen_bool(0.4)));
        nfa.normalized()
    }

    #[test]
    fn named_languages_pass_every_check() {
        for (re, syms) in [
            ("a+aa", &["a"][..]),
            ("(a+b)*a(a+b)", &["a", "b"][..]),
            ("a(b+ab)*", &["a", "b"][..]),
            ("#", &["a"][..]),
            ("@", &["a", "b"][..]),
        ] {
            let l = lang(re, syms);
            let q = minimal_jsl(&l).unwrap();
            check_astarprops(&q).unwrap();
            check_lqdual(&l).unwrap();
            check_drl(&l).unwrap();
            check_blqdual(&l).unwrap();
            check_blrqdual(&l).unwrap();
            check_tsdual(&q).unwrap();
        }
    }

    #[test]
    fn random_nfas_pass_every_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut ran = 0;
        for _ in 0..40 {
            let n = random_nfa(&mut rng, 4, 2);
            let r = check_all(&n).unwrap();
            ran += r.passed.len();
        }
        assert!(ran >= 40 * 7);
    }

    /// The checks are not vacuous: a wrong candidate map or formula is rejected.
    #[test]
    fn checks_detect_wrong_maps() {
        let l = lang("(a+b)*a(a+b)", &["a", "b"]);
        // dual derivative with reversal omitted is wrong on this language
        let q = minimal_jsl(&l).unwrap();
        let ok = q
            .state_languages()
            .iter()
            .all(|k| l.left_quotient_by_set(&k.complement()) == dual_derivative(&l, k));
        assert!(!ok);
        // an identity correspondence between states and atoms fails when the numbering differs
        let sp = AtomSpace::left(&l);
        let d = l.reverse();
        let id: Vec<u32> = (0..sp.n_atoms() as u32).collect();
        let wrong = (0..sp.n_atoms() as u32).rev().collect::<Vec<_>>();
        let ok_id = check_atom_correspondence(d.dfa(), &sp, &id, "t").is_ok();
        let ok_rev = check_atom_correspondence(d.dfa(), &sp, &wrong, "t").is_ok();
        assert!(!(ok_id && ok_rev));
    }

    #[test]
    fn failures_are_reported_as_check_errors() {
        let a = minimal_jsl(&lang("a+aa", &["a"])).unwrap();
        let p = powerset(&{
            let mut n = Nfa::new(1, 2);
            n.set_initial([0]);
            n.set_final([0]);
            n
        })
        .unwrap();
        // {1} is not a join of reachable elements
        assert!(!p.is_reachable());
        assert!(matches!(check_tsdual(&p), Err(Error::Check(_))));
        assert!(check_tsdual(&a).is_ok());
    }

    /// Both routes of the semiring duality accept the same automata, and the label route
    /// needs no materialized order.
    #[test]
    fn label_route_matches_materialized_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = random_nfa(&mut rng, 3, 2);
            let q = minimal_jsl(&n.language()).unwrap();
            let p = reachable_part(&powerset(&n).unwrap()).0;
            for a in [&q, &p] {
                if transition_semiring(a, SEMIRING_BUDGET).is_ok() {
                    assert!(check_tsdual(a).is_ok());
                    assert!(check_tsdual_by_labels(a, LABEL_ROUTE_ELEMENTS).is_ok());
                }
            }
        }
        let p = powerset(&{
            let mut n = Nfa::new(1, 2);
            n.set_initial([0]);
            n.set_final([0]);
            n
        })
        .unwrap();
        assert!(matches!(
            check_tsdual_by_labels(&p, LABEL_ROUTE_ELEMENTS),
            Err(Error::Check(_))
        ));
        assert!(
            check_tsdual_by_labels(&minimal_jsl(&lang("(a+b)*a(a+b)", &["a", "b"])).unwrap(), 2)
                .unwrap_err()
                .is_budget()
        );
    }
}
