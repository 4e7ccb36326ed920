use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jsl_automata::minimal_jsl;
use crate::lang_core::{print_aut, Alphabet, LanguageHandle, Nfa};
use crate::monoids::{syntactic_monoid, MONOID_BUDGET};

use super::budget::SearchBudget;
use super::dependency::dependency;
use super::matrix::{bipartite_dimension, Dimension};
use super::ns::{ns_search, nsyn_search, Bounds};
use super::residual::{classify, is_maximal_reachability_witness, Classification};

/// Every measure of one language, with the cross-measure inequalities checked.
#[derive(Clone, Debug)]
pub struct ComplexityReport {
    pub ns: Bounds,
    pub nsyn: Bounds,
    pub dim: Dimension,
    /// Number of distinct left derivatives.
    pub ld_size: usize,
    pub syn_size: usize,
    /// Join-irreducibles of the quotient semilattice: the degree of its canonical
    /// representation and the size of the canonical residual automaton.
    pub q_irreducibles: usize,
    pub flags: Classification,
    /// For an analysed acceptor: whether it reaches `2^|N|` derivatives.
    pub maximal_reachability_witness: Option<bool>,
    /// Claim and the method that established it.
    pub provenance: Vec<(String, String)>,
}

fn nonempty_derivatives(l: &LanguageHandle) -> usize {
    l.derivative_set().iter().filter(|d| !d.is_empty()).count()
}

/// Runs every analysis on `l`; `acceptor`, when given, must accept `l`.
pub fn analyze(l: &LanguageHandle, acceptor: Option<&Nfa>, budget: &SearchBudget) -> Result<ComplexityReport> {
    if let Some(n) = acceptor {
        if n.language() != *l {
            return Err(Error::Precondition("acceptor does not accept the language".into()));
        }
    }
    let dim = bipartite_dimension(&dependency(l).matrix, budget)?;
    let ns = ns_search(l, budget)?;
    let mut nsyn = nsyn_search(l, budget)?;
    let mut provenance = Vec::new();
    if ns.lower > nsyn.lower {
        nsyn.lower = ns.lower;
        nsyn.exact = nsyn.lower == nsyn.upper;
        nsyn.method.push(format!("lower ≥ {}: ns", ns.lower));
    }
    let q = minimal_jsl(l)?;
    let q_irreducibles = q.semilattice().join_irreducibles().len();
    let syn = syntactic_monoid(l, MONOID_BUDGET)?;
    let flags = classify(l)?;
    let checks = [
        (dim.lower <= ns.upper, "dim ≤ ns"),
        (ns.lower <= nsyn.upper, "ns ≤ nsyn"),
        (nsyn.lower <= q_irreducibles, "nsyn ≤ |J(Q(L))|"),
        (!(dim.exact && ns.exact) || dim.upper <= ns.upper, "dim ≤ ns (exact)"),
        (
            !(flags.cyclic_syntactic_group && ns.exact && nsyn.exact) || ns.upper == nsyn.upper,
            "cyclic syntactic group ⇒ ns = nsyn",
        ),
        (
            !(flags.bideterministic && ns.exact && nsyn.exact)
                || (ns.upper == nonempty_derivatives(l) && nsyn.upper == ns.upper),
            "bideterministic ⇒ ns = nsyn = number of nonempty derivatives",
        ),
    ];
    for (ok, what) in checks {
        if !ok {
            return Err(Error::Check(what.into()));
        }
        provenance.push((what.to_string(), "checked on the computed values".to_string()));
    }
    for m in &ns.method {
        provenance.push(("ns".into(), m.clone()));
    }
    for m in &nsyn.method {
        provenance.push(("nsyn".into(), m.clone()));
    }
    provenance.push(("dim".into(), format!("set basis search, exact = {}", dim.exact)));
    Ok(ComplexityReport {
        ns,
        nsyn,
        dim,
        ld_size: l.n_states(),
        syn_size: syn.len(),
        q_irreducibles,
        flags,
        maximal_reachability_witness: acceptor.map(is_maximal_reachability_witness),
        provenance,
    })
}

/// `{lower, upper, exact, method, witness_aut?}`.
pub fn bounds_json(b: &Bounds, alphabet: &Alphabet) -> Value {
    let mut v = json!({
        "lower": b.lower,
        "upper": b.upper,
        "exact": b.exact,
        "method": b.method,
    });
    if let Some(w) = &b.witness {
        v["witness_aut"] = json!(print_aut(alphabet, w));
    }
    v
}

impl ComplexityReport {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "ns": bounds_json(&self.ns, alphabet),
            "nsyn": bounds_json(&self.nsyn, alphabet),
            "dim": {"lower": self.dim.lower, "upper": self.dim.upper, "exact": self.dim.exact},
            "ld_size": self.ld_size,
            "syn_size": self.syn_size,
            "q_irreducibles": self.q_irreducibles,
            "flags": {
                "bideterministic": self.flags.bideterministic,
                "biseparable": self.flags.biseparable,
                "topological": self.flags.topological,
                "birfsa": self.flags.birfsa,
                "extremal": self.flags.extremal,
                "extremal_markowsky": self.flags.extremal_markowsky,
                "unitriangular": self.flags.unitriangular,
                "cyclic_unary": self.flags.cyclic_unary,
                "cyclic_syntactic_group": self.flags.cyclic_syntactic_group,
                "theta_isomorphism": self.flags.theta_isomorphism,
                "maximal_reachability_witness": self.maximal_reachability_witness,
            },
            "provenance": self.provenance.iter().map(|(c, m)| json!({"claim": c, "method": m})).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let range = |b: &Bounds| {
            if b.exact {
                b.upper.to_string()
            } else {
                format!("[{}, {}]", b.lower, b.upper)
            }
        };
        let mut out = String::new();
        writeln!(out, "ns = {}", range(&self.ns)).unwrap();
        writeln!(out, "nsyn = {}", range(&self.nsyn)).unwrap();
        let dim = if self.dim.exact {
            self.dim.upper.to_string()
        } else {
            format!("[{}, {}]", self.dim.lower, self.dim.upper)
        };
        writeln!(out, "dim = {dim}").unwrap();
        writeln!(out, "derivatives = {}", self.ld_size).unwrap();
        writeln!(out, "syntactic monoid = {}", self.syn_size).unwrap();
        writeln!(out, "irreducible quotients = {}", self.q_irreducibles).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::parse_regex;

    #[test]
    fn shift_language_report() {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let l = LanguageHandle::from_regex(&parse_regex("(0+1)*1(0+1)", &a).unwrap(), 2);
        let r = analyze(&l, None, &SearchBudget::default()).unwrap();
        assert!(r.ns.exact && r.ns.upper == 3);
        assert!(r.nsyn.exact && r.nsyn.upper == 3);
        assert_eq!(r.q_irreducibles, 3);
        let v = r.to_json(&a);
        assert_eq!(v["ns"]["upper"], 3);
        let (_, w) = crate::lang_core::parse_aut(v["ns"]["witness_aut"].as_str().unwrap()).unwrap();
        assert_eq!(w.language(), l);
    }
}
