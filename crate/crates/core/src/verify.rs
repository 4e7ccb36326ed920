//! The example corpus as a list of checkable claims, each with its observed value.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexity::{
    atomic_search, canonical_residual, chrobak_normal_form, chrobak_to_atomic, classify, dependency, is_atomic,
    is_chrobak_normal_form, is_nfa_isomorphism, is_subatomic, ns_search, nsyn_search, theta, SearchBudget,
    CNF_CONSTANT,
};
use crate::error::Result;
use crate::fixtures::{self, Fixture};
use crate::jsl_automata::{blq, blrq, duality, minimal_jsl, AtomSpace};
use crate::lang_core::{parse_regex, Alphabet, LanguageHandle};
use crate::monoids::{
    canonical_representation, monoid_quotient_compare, syntactic_monoid, transition_monoid, QuotientRelation,
    MONOID_BUDGET,
};
use crate::sampling;
use crate::semilattice::{iso_search, FiniteSemilattice, ISO_BUDGET};

/// Outcome of one claim.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub extended: bool,
    pub claims: Vec<Claim>,
}

impl PaperReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.claims.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect()
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

struct Runner {
    claims: Vec<Claim>,
}

impl Runner {
    /// Records `expected` against what `f` observes; an error is a failed claim.
    fn claim<T: ToString + PartialEq>(
        &mut self,
        id: &str,
        statement: &str,
        expected: T,
        f: impl FnOnce() -> Result<T>,
    ) {
        let start = Instant::now();
        let got = f();
        let millis = start.elapsed().as_millis();
        let (observed, pass) = match got {
            Ok(v) => (v.to_string(), v == expected),
            Err(e) => (format!("error: {e}"), false),
        };
        self.claims.push(Claim {
            id: id.into(),
            statement: statement.into(),
            expected: expected.to_string(),
            observed,
            pass,
            millis,
        });
    }
}

fn lang(re: &str, syms: &[&str]) -> Result<LanguageHandle> {
    let a = Alphabet::new(syms.iter().copied())?;
    Ok(LanguageHandle::from_regex(&parse_regex(re, &a)?, a.len()))
}

fn m3() -> Result<FiniteSemilattice> {
    let g = [[0, 1], [0, 2], [1, 2]].map(|s| crate::bits::bitset(3, s));
    FiniteSemilattice::from_union_closure(3, &g, 16)
}

/// Runs every claim. `extended` raises the sample counts and the budgets of the
/// independent second routes.
pub fn verify_paper(extended: bool, seed: u64) -> Result<PaperReport> {
    let mut r = Runner { claims: Vec::new() };
    let budget = if extended {
        SearchBudget::with_nodes(1_000_000_000)
    } else {
        SearchBudget::default()
    };
    let samples = if extended { 500 } else { 100 };
    let fx: Vec<Fixture> = fixtures::load_all()?;
    let get = |name: &str| fx.iter().find(|f| f.name == name).unwrap();

    // shift languages
    for n in 0..4 {
        let l = get(&format!("F_LN{n}")).language.clone();
        r.claim(
            &format!("ln{n}.degree"),
            "degree of the canonical representation is n + 2",
            n + 2,
            || Ok(canonical_representation(&l)?.degree()),
        );
        if n < 3 {
            r.claim(
                &format!("ln{n}.ns"),
                "exact ns is n + 2",
                format!("exact {}", n + 2),
                || {
                    let b = ns_search(&l, &budget)?;
                    Ok(format!("{} {}", if b.exact { "exact" } else { "bounds" }, b.upper))
                },
            );
        }
    }

    // three-letter example with a diamond
    let m3l = get("F_M3").language.clone();
    r.claim("m3.degree", "degree of the canonical representation is 5", 5, || {
        Ok(canonical_representation(&m3l)?.degree())
    });
    r.claim("m3.product", "quotient semilattice ≅ 2 × M3 × 2", true, || {
        let two = FiniteSemilattice::chain(2);
        let p = FiniteSemilattice::product(&FiniteSemilattice::product(&two, &m3()?), &two);
        let q = minimal_jsl(&m3l)?;
        Ok(iso_search(q.semilattice(), &Arc::new(p), ISO_BUDGET)?.is_some())
    });
    r.claim(
        "m3.m3_elements",
        "M3 as a union closure has 5 elements and is not distributive",
        "5, false".to_string(),
        || {
            let s = m3()?;
            Ok(format!("{}, {}", s.len(), s.is_distributive()))
        },
    );
    r.claim("m3.not_topological", "not topological", false, || {
        Ok(classify(&m3l)?.topological)
    });

    // subatomic but not atomic
    let sub = get("F_SUB");
    let sub_nfa = sub.nfa.clone().unwrap();
    let sub_l = sub.language.clone();
    r.claim("sub.min_dfa", "minimal dfa of L has 9 states", 9, || {
        Ok(sub_l.n_states())
    });
    r.claim("sub.min_dfa_rev", "minimal dfa of rev L has 6 states", 6, || {
        Ok(sub_l.reverse().n_states())
    });
    r.claim(
        "sub.tm_rsc_rev",
        "transition monoid of rsc(rev N) has 22 elements",
        22,
        || Ok(transition_monoid(&sub_nfa.reverse().rsc(), MONOID_BUDGET)?.len()),
    );
    r.claim("sub.syn_rev", "syntactic monoid of rev L has 22 elements", 22, || {
        Ok(syntactic_monoid(&sub_l.reverse(), MONOID_BUDGET)?.len())
    });
    r.claim("sub.monoids_iso", "the two monoids are isomorphic", true, || {
        let tm = transition_monoid(&sub_nfa.reverse().rsc(), MONOID_BUDGET)?;
        let syn = syntactic_monoid(&sub_l.reverse(), MONOID_BUDGET)?;
        Ok(monoid_quotient_compare(&tm, &syn) == QuotientRelation::Iso)
    });
    r.claim("sub.subatomic", "N is subatomic", true, || is_subatomic(&sub_nfa));
    r.claim("sub.not_atomic", "N is not atomic", false, || Ok(is_atomic(&sub_nfa)));
    r.claim(
        "sub.no_atomic_4",
        "no atomic nfa with four states accepts L",
        "none (sat), none (family)".to_string(),
        || {
            let sat = crate::complexity::atom_acceptor(&AtomSpace::left(&sub_l), 4)?;
            let family = match atomic_search(&sub_l, 4, &budget) {
                Ok(f) => {
                    if f.is_some() {
                        "found"
                    } else {
                        "none"
                    }
                }
                Err(e) if e.is_budget() => "over budget",
                Err(e) => return Err(e),
            };
            Ok(format!(
                "{} (sat), {family} (family)",
                if sat.is_some() { "found" } else { "none" }
            ))
        },
    );
    r.claim("sub.nsyn", "nsyn of L is 4", 4, || {
        Ok(nsyn_search(&sub_l, &budget)?.upper)
    });

    // unary language missing one length
    let u5 = get("F_U5");
    let u5_nfa = u5.nfa.clone().unwrap();
    let u5_l = u5.language.clone();
    r.claim(
        "u5.nfa_accepts",
        "the five-state nfa accepts {a^n : n ≠ 5}",
        true,
        || Ok(u5_nfa.language() == u5_l),
    );
    r.claim(
        "u5.nfa_not_subatomic",
        "the five-state nfa is not subatomic",
        false,
        || is_subatomic(&u5_nfa),
    );
    r.claim("u5.ns", "ns is exactly 5", "exact 5".to_string(), || {
        let b = ns_search(&u5_l, &budget)?;
        Ok(format!("{} {}", if b.exact { "exact" } else { "bounds" }, b.upper))
    });
    r.claim(
        "u5.residual",
        "the canonical residual automaton is a 6-state subatomic acceptor",
        "6, true".to_string(),
        || {
            let n = canonical_residual(&u5_l)?;
            Ok(format!(
                "{}, {}",
                n.n_states(),
                n.language() == u5_l && is_subatomic(&n)?
            ))
        },
    );
    r.claim(
        "u5.nsyn",
        "no subatomic nfa with five states; nsyn is 6",
        "exact 6".to_string(),
        || {
            let b = nsyn_search(&u5_l, &budget)?;
            Ok(format!("{} {}", if b.exact { "exact" } else { "bounds" }, b.upper))
        },
    );
    r.claim(
        "u5.blrq_is_blq",
        "two-sided and left boolean closures coincide on a unary language",
        true,
        || Ok(blq(&u5_l)?.len() == blrq(&u5_l)?.len()),
    );

    // two-word language
    let aa = get("F_AA").language.clone();
    r.claim("aa.derivative", "a⁻¹{a, aa} = {ε, a}", true, || {
        Ok(aa.left_derivative(&[0]) == lang("@+a", &["a"])?)
    });
    r.claim("aa.union", "a⁻¹L ∪ L = {ε, a, aa}", true, || {
        Ok(aa.left_derivative(&[0]).union(&aa) == lang("@+a+aa", &["a"])?)
    });
    r.claim(
        "aa.lattice",
        "the minimal semilattice automaton has 5 states",
        5,
        || Ok(minimal_jsl(&aa)?.len()),
    );

    // fixture-wide theorems
    for f in &fx {
        let nfa = match &f.nfa {
            Some(n) => n.clone(),
            None => canonical_residual(&f.language)?,
        };
        r.claim(
            &format!("{}.duality", f.name),
            "every duality check holds or is skipped on budget",
            true,
            || duality::check_all(&nfa).map(|_| true),
        );
        let l = f.language.clone();
        r.claim(
            &format!("{}.dependency", f.name),
            "all three parts of the dependency theorem hold",
            true,
            || dependency(&l).check_all().map(|_| true),
        );
    }

    // language classes on samples
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let langs: Vec<LanguageHandle> = (0..samples)
        .map(|_| sampling::random_language(&mut rng, 4, 2))
        .collect();
    r.claim(
        "classes.implications",
        "class implications and topological ⟺ biRFSA on samples",
        0,
        || {
            let mut bad = 0;
            for l in &langs {
                // classify enforces the implications itself
                if classify(l).is_err() {
                    bad += 1;
                }
            }
            Ok(bad)
        },
    );
    r.claim(
        "classes.theta",
        "the dual map is a residual isomorphism on topological samples",
        0,
        || {
            let mut bad = 0;
            for l in &langs {
                if classify(l)?.topological {
                    let a = canonical_residual(l)?;
                    let b = canonical_residual(&l.reverse())?.reverse();
                    if !theta(l)?.is_some_and(|m| is_nfa_isomorphism(&a, &b, &m)) {
                        bad += 1;
                    }
                }
            }
            Ok(bad)
        },
    );
    r.claim(
        "classes.extremal_by_length",
        "length = |J(Q(L))| alone makes the reduced relation unitriangularizable (fixed counterexample)",
        true,
        || {
            let d = crate::lang_core::Dfa::from_parts(
                2,
                vec![1, 0, 2, 3, 4, 2, 1, 5, 4, 4, 6, 3, 2, 7, 1, 8, 6, 7],
                0,
                vec![false, false, true, true, false, false, true, true, true],
            );
            let c = classify(&LanguageHandle::from_dfa(&d))?;
            Ok(!c.extremal || c.unitriangular)
        },
    );
    r.claim(
        "classes.bideterministic",
        "ns = nsyn = nonempty derivatives on bideterministic languages",
        0,
        || {
            let mut bad = 0;
            for re in ["ab", "(ab)*", "a+b", "abc+b", "a(ba)*"] {
                let l = lang(re, &["a", "b", "c"])?;
                let k = l.derivative_set().iter().filter(|d| !d.is_empty()).count();
                let (ns, nsyn) = (ns_search(&l, &budget)?, nsyn_search(&l, &budget)?);
                if !classify(&l)?.bideterministic || ns.upper != k || nsyn.upper != k || !ns.exact || !nsyn.exact {
                    bad += 1;
                }
            }
            Ok(bad)
        },
    );
    r.claim(
        "classes.cyclic_unary",
        "ns = nsyn on cyclic unary languages of period at most 6",
        0,
        || {
            let mut bad = 0;
            for _ in 0..samples / 4 {
                let l = sampling::random_cyclic_unary(&mut rng, 6);
                let (ns, nsyn) = (ns_search(&l, &budget)?, nsyn_search(&l, &budget)?);
                if !(ns.exact && nsyn.exact && ns.upper == nsyn.upper) {
                    bad += 1;
                }
            }
            Ok(bad)
        },
    );
    r.claim(
        "chrobak",
        "normal form is equivalent, within the bound, and has an atomic replacement",
        0,
        || {
            let mut bad = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..samples {
                let n = sampling::random_nfa(&mut rng, 8, 1, 0.2);
                let cnf = chrobak_normal_form(&n)?;
                let atomic = chrobak_to_atomic(&cnf)?;
                let ok = is_chrobak_normal_form(&cnf)
                    && cnf.language() == n.language()
                    && cnf.n_states() <= CNF_CONSTANT * n.n_states() * n.n_states()
                    && atomic.n_states() <= cnf.n_states()
                    && atomic.language() == n.language()
                    && is_atomic(&atomic);
                bad += usize::from(!ok);
            }
            Ok(bad)
        },
    );
    Ok(PaperReport {
        extended,
        claims: r.claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_the_unattainable_claims_fail() {
        let r = verify_paper(false, 7).unwrap();
        for c in &r.claims {
            eprintln!(
                "{} {} expected {} observed {} ({} ms)",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.expected,
                c.observed,
                c.millis
            );
        }
        assert_eq!(
            r.failed(),
            vec![
                "sub.tm_rsc_rev",
                "sub.syn_rev",
                "sub.monoids_iso",
                "sub.subatomic",
                "sub.nsyn",
                "classes.extremal_by_length"
            ]
        );
    }
}
