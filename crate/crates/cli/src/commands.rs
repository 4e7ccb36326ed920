use std::fmt::Write as _;
use std::io::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use nsc_core::complexity::{
    analyze, bipartite_dimension, bounds_json, canonical_residual, chrobak_normal_form, chrobak_to_atomic, classify,
    dependency, is_atomic_by_atoms, is_atomic_by_reverse, is_maximal_reachability_witness, is_subatomic_by_atoms,
    is_subatomic_by_reverse, ns_search, nsyn_search, Bounds,
};
use nsc_core::jsl_automata::{dual_auto, duality, minimal_jsl};
use nsc_core::lang_core::{print_aut, print_dfa};
use nsc_core::monoids::{syntactic_monoid, MONOID_BUDGET};
use nsc_core::verify::verify_paper;
use nsc_core::{sampling, Error, Result};

use crate::input::{load, Input, Source};
use crate::{Command, Format, Global};

/// Writes the report; a closed stdout (e.g. piped into `head`) is not an error.
fn emit(g: &Global, value: Value, text: impl FnOnce() -> String) {
    let out = match g.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("json values serialize") + "\n",
        Format::Text => text(),
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn input(g: &Global) -> Result<Input> {
    load(&Source {
        regex: g.regex.as_deref(),
        aut: g.aut.as_deref(),
        fixture: g.fixture.as_deref(),
        alphabet: g.alphabet.as_deref(),
    })
}

fn bounds_text(name: &str, b: &Bounds) -> String {
    let mut out = if b.exact {
        format!("{name} = {}\n", b.upper)
    } else {
        format!("{name} ∈ [{}, {}]\n", b.lower, b.upper)
    };
    for m in &b.method {
        writeln!(out, "  {m}").unwrap();
    }
    out
}

/// Exit code for a search result: 3 when only bounds are known.
fn bounds_code(b: &Bounds) -> u8 {
    if b.exact {
        0
    } else {
        3
    }
}

pub fn run(cmd: Command, g: &Global) -> Result<u8> {
    match cmd {
        Command::VerifyPaper => return verify(g),
        Command::Selftest => return selftest(g),
        _ => {}
    }
    let inp = input(g)?;
    let (alpha, l) = (&inp.alphabet, &inp.language);
    let budget = g.budget();
    match cmd {
        Command::MinDfa => {
            let aut = print_dfa(alpha, l.dfa());
            emit(g, json!({"states": l.n_states(), "aut": aut}), || aut.clone());
        }
        Command::Monoid => {
            let m = syntactic_monoid(l, MONOID_BUDGET)?;
            let mut v = m.to_json(alpha);
            v["is_group"] = json!(m.is_group());
            v["is_cyclic_group"] = json!(m.is_cyclic_group());
            emit(g, v, || {
                format!(
                    "syntactic monoid: {} elements, group: {}, cyclic group: {}\n",
                    m.len(),
                    m.is_group(),
                    m.is_cyclic_group()
                )
            });
        }
        Command::Lattice => {
            let q = minimal_jsl(l)?;
            let s = q.semilattice();
            let p = s.predicates();
            let mut v = s.to_json();
            v["predicates"] = json!({
                "distributive": p.is_distributive,
                "boolean": p.is_boolean,
                "length": p.length,
                "extremal": p.is_extremal,
                "meet_irreducibles": s.meet_irreducibles().len(),
            });
            emit(g, v, || {
                format!(
                    "{} elements, {} join-irreducible, {} meet-irreducible, length {}\ndistributive: {}, boolean: {}, extremal: {}\n",
                    s.len(),
                    s.join_irreducibles().len(),
                    s.meet_irreducibles().len(),
                    p.length,
                    p.is_distributive,
                    p.is_boolean,
                    p.is_extremal
                )
            });
        }
        Command::Dependency => {
            let d = dependency(l);
            let checks = d.check_all();
            let mut v = d.to_json(alpha);
            v["reduced"] = d.reduced().to_json(alpha);
            v["theorem_checks"] = json!(checks.is_ok());
            emit(g, v, || {
                let mut out = String::new();
                writeln!(
                    out,
                    "rows: {}",
                    d.row_words
                        .iter()
                        .map(|w| alpha.format_word(w))
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
                writeln!(
                    out,
                    "cols: {}",
                    d.col_words
                        .iter()
                        .map(|w| alpha.format_word(w))
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
                for row in d.matrix.to_strings() {
                    writeln!(out, "{row}").unwrap();
                }
                writeln!(out, "theorem checks: {}", if checks.is_ok() { "pass" } else { "FAIL" }).unwrap();
                out
            });
            checks?;
        }
        Command::Dim => {
            let dim = bipartite_dimension(&dependency(l).matrix, &budget)?;
            emit(
                g,
                json!({"lower": dim.lower, "upper": dim.upper, "exact": dim.exact, "cover": dim.cover.bicliques}),
                || {
                    if dim.exact {
                        format!("dim = {}\n", dim.upper)
                    } else {
                        format!("dim ∈ [{}, {}]\n", dim.lower, dim.upper)
                    }
                },
            );
            return Ok(if dim.exact { 0 } else { 3 });
        }
        Command::Ns | Command::Nsyn => {
            let (name, b) = if matches!(cmd, Command::Ns) {
                ("ns", ns_search(l, &budget)?)
            } else {
                ("nsyn", nsyn_search(l, &budget)?)
            };
            emit(g, bounds_json(&b, alpha), || {
                let mut out = bounds_text(name, &b);
                if let Some(w) = &b.witness {
                    out.push_str(&print_aut(alpha, w));
                }
                out
            });
            return Ok(bounds_code(&b));
        }
        Command::Residual => {
            let n = canonical_residual(l)?;
            let aut = print_aut(alpha, &n);
            emit(g, json!({"states": n.n_states(), "aut": aut}), || aut.clone());
        }
        Command::Chrobak => {
            let cnf = chrobak_normal_form(&inp.nfa)?;
            let atomic = chrobak_to_atomic(&cnf)?;
            let (c, a) = (print_aut(alpha, &cnf), print_aut(alpha, &atomic));
            emit(
                g,
                json!({
                    "input_states": inp.nfa.n_states(),
                    "cnf": {"states": cnf.n_states(), "aut": c},
                    "atomic": {"states": atomic.n_states(), "aut": a},
                }),
                || {
                    format!(
                        "normal form, {} states:\n{c}atomic replacement, {} states:\n{a}",
                        cnf.n_states(),
                        atomic.n_states()
                    )
                },
            );
        }
        Command::CheckAtomic | Command::CheckSubatomic => {
            let atomic = matches!(cmd, Command::CheckAtomic);
            let (by_atoms, by_reverse) = if atomic {
                (is_atomic_by_atoms(&inp.nfa), is_atomic_by_reverse(&inp.nfa))
            } else {
                (is_subatomic_by_atoms(&inp.nfa)?, is_subatomic_by_reverse(&inp.nfa)?)
            };
            let what = if atomic { "atomic" } else { "subatomic" };
            emit(
                g,
                json!({what: by_atoms, "by_state_languages": by_atoms, "by_reverse": by_reverse}),
                || format!("{what}: {by_atoms} (state languages: {by_atoms}, reverse: {by_reverse})\n"),
            );
            if by_atoms != by_reverse {
                return Err(Error::Check(format!("the two {what} tests disagree")));
            }
        }
        Command::Dualize => {
            let q = minimal_jsl(l)?;
            let d = dual_auto(&q);
            let accepts_reverse = d.language() == l.reverse();
            let mut v = d.to_json();
            v["accepts_reverse"] = json!(accepts_reverse);
            emit(g, v, || {
                format!(
                    "dual of the minimal semilattice automaton: {} states, accepts the reverse: {accepts_reverse}\n",
                    d.len()
                )
            });
            if !accepts_reverse {
                return Err(Error::Check("dual does not accept the reverse language".into()));
            }
        }
        Command::Classify => {
            let c = classify(l)?;
            let mut v = serde_json::to_value(&c).expect("flags serialize");
            v["maximal_reachability_witness"] = json!(is_maximal_reachability_witness(&inp.nfa));
            emit(g, v.clone(), || {
                let mut out = String::new();
                for (k, x) in v.as_object().unwrap() {
                    writeln!(out, "{k}: {x}").unwrap();
                }
                out
            });
        }
        Command::Report => {
            let r = analyze(l, Some(&inp.nfa), &budget)?;
            emit(g, r.to_json(alpha), || r.to_text());
            return Ok(if r.ns.exact && r.nsyn.exact && r.dim.exact {
                0
            } else {
                3
            });
        }
        Command::VerifyPaper | Command::Selftest => unreachable!(),
    }
    Ok(0)
}

fn verify(g: &Global) -> Result<u8> {
    let r = verify_paper(g.extended, g.seed)?;
    emit(g, serde_json::to_value(&r).expect("report serializes"), || {
        let mut out = String::new();
        for c in &r.claims {
            writeln!(
                out,
                "{} {:<28} expected {:<12} observed {:<12} {:>6} ms",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.expected,
                c.observed,
                c.millis
            )
            .unwrap();
        }
        let failed = r.failed().len();
        writeln!(out, "{} of {} claims pass", r.claims.len() - failed, r.claims.len()).unwrap();
        out
    });
    Ok(if r.all_pass() { 0 } else { 1 })
}

/// Route agreement for both characterizations and every duality check on random nfas.
fn selftest(g: &Global) -> Result<u8> {
    let samples = if g.extended { 2000 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (mut disagreements, mut duality_failures, mut skipped) = (0, 0, 0);
    for _ in 0..samples {
        let n = sampling::random_nfa(&mut rng, 4, 2, 0.3);
        disagreements += usize::from(is_atomic_by_atoms(&n) != is_atomic_by_reverse(&n));
        disagreements += usize::from(is_subatomic_by_atoms(&n)? != is_subatomic_by_reverse(&n)?);
        match duality::check_all(&n) {
            Ok(r) => skipped += r.skipped.len(),
            Err(Error::Check(msg)) => {
                eprintln!("duality: {msg}");
                duality_failures += 1;
            }
            Err(e) => return Err(e),
        }
    }
    emit(
        g,
        json!({"seed": g.seed, "samples": samples, "disagreements": disagreements, "duality_failures": duality_failures, "skipped_checks": skipped}),
        || {
            format!("{samples} nfas (seed {}): {disagreements} disagreements, {duality_failures} duality failures, {skipped} checks skipped\n", g.seed)
        },
    );
    Ok(if disagreements + duality_failures == 0 { 0 } else { 1 })
}
