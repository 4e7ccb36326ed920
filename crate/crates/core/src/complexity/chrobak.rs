use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lang_core::Nfa;

/// Size bound of [`chrobak_normal_form`]: at most `CNF_CONSTANT · n²` states for an
/// `n`-state input with `n ≥ 1` (tail of at most `n² + n` states plus cycles of total
/// length at most `n`).
pub const CNF_CONSTANT: usize = 3;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn require_unary(n: &Nfa) -> Result<()> {
    if n.n_symbols() != 1 {
        return Err(Error::Precondition(format!(
            "expected a unary nfa, got {} symbols",
            n.n_symbols()
        )));
    }
    Ok(())
}

/// Nontrivial strongly connected components with their periods (gcd of cycle lengths).
fn cyclic_components(n: &Nfa) -> Vec<(FixedBitSet, usize)> {
    let k = n.n_states();
    // reach[q]: states reachable from q in at least one step
    let mut reach: Vec<FixedBitSet> = (0..k as u32).map(|q| n.set_of(n.successors(q, 0))).collect();
    loop {
        let mut changed = false;
        for q in 0..k {
            let mut next = reach[q].clone();
            for p in reach[q].ones() {
                next.union_with(&reach[p]);
            }
            if next != reach[q] {
                reach[q] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut done = FixedBitSet::with_capacity(k);
    let mut out = Vec::new();
    for root in 0..k {
        if done[root] || !reach[root][root] {
            continue;
        }
        let mut comp = FixedBitSet::with_capacity(k);
        for p in 0..k {
            if reach[root][p] && reach[p][root] {
                comp.insert(p);
            }
        }
        done.union_with(&comp);
        // levels from the root inside the component; every internal edge u → v closes a
        // cycle of length level(u) + 1 − level(v) modulo the period
        let mut level = vec![usize::MAX; k];
        level[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut period = 0;
        while let Some(u) = queue.pop_front() {
            for &v in n.successors(u as u32, 0) {
                let v = v as usize;
                if !comp[v] {
                    continue;
                }
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    period = gcd(period, (level[u] + 1).abs_diff(level[v]));
                }
            }
        }
        out.push((comp, period));
    }
    out
}

/// One cycle of the normal form: period and accepted residues of the word length.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cycle {
    period: usize,
    residues: Vec<bool>,
}

/// Membership of each length below `horizon`, and for every cyclic component whether
/// some accepting path of that length passes through it.
fn length_profiles(n: &Nfa, comps: &[(FixedBitSet, usize)], horizon: usize) -> (Vec<bool>, Vec<Vec<bool>>) {
    let fin = n.set_of(n.finals());
    let mut cur = n.set_of(n.initial());
    let mut member = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        member.push(cur.intersection(&fin).next().is_some());
        cur = n.step(&cur, 0);
    }
    let via = comps
        .iter()
        .map(|(comp, _)| {
            // states reached by a path that has visited the component
            let mut all = n.set_of(n.initial());
            let mut seen = all.clone();
            seen.intersect_with(comp);
            let mut out = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                out.push(seen.intersection(&fin).next().is_some());
                let mut next_seen = n.step(&seen, 0);
                all = n.step(&all, 0);
                next_seen.union_with(&all.intersection(comp).collect::<FixedBitSet>());
                seen = next_seen;
            }
            out
        })
        .collect();
    (member, via)
}

/// A tail `0 → 1 → … → tail−1` whose last state branches into the cycles; with an empty
/// tail the single cycle starts at the initial state. Cycle residues are of the absolute
/// word length.
fn assemble(member: &[bool], tail: usize, cycles: &[Cycle]) -> Nfa {
    let total = tail + cycles.iter().map(|c| c.period).sum::<usize>();
    let mut n = Nfa::new(1, total);
    let mut finals: Vec<u32> = (0..tail).filter(|&m| member[m]).map(|m| m as u32).collect();
    for m in 1..tail {
        n.add_transition(m as u32 - 1, 0, m as u32);
    }
    let mut base = tail;
    for c in cycles {
        // state base + i accepts lengths ≡ tail + i (mod period)
        for i in 0..c.period {
            n.add_transition((base + i) as u32, 0, (base + (i + 1) % c.period) as u32);
            if c.residues[(tail + i) % c.period] {
                finals.push((base + i) as u32);
            }
        }
        if tail > 0 {
            n.add_transition(tail as u32 - 1, 0, base as u32);
        }
        base += c.period;
    }
    n.set_initial([0]);
    n.set_final(finals);
    n.normalized()
}

/// Equivalent unary nfa with a single initial state and at most one state with several
/// successors, whose successors lie in disjoint cycles.
///
/// Every accepting path of length at least `|n|` runs through a cyclic component, and the
/// lengths of accepting paths through a component of period `d` are eventually
/// `d`-periodic. The tail starts at `n² + n` and doubles until the result is equivalent,
/// then shrinks while the cycles already decide the last tail length.
pub fn chrobak_normal_form(n: &Nfa) -> Result<Nfa> {
    require_unary(n)?;
    let l = n.language();
    let comps = cyclic_components(n);
    let max_period = comps.iter().map(|c| c.1).max().unwrap_or(1);
    let mut tail = n.n_states() * n.n_states() + n.n_states();
    loop {
        let (member, via) = length_profiles(n, &comps, tail + max_period);
        let cycles: Vec<Cycle> = comps
            .iter()
            .zip(&via)
            .map(|((_, d), v)| {
                let mut residues = vec![false; *d];
                for m in tail..tail + d {
                    residues[m % d] |= v[m];
                }
                Cycle { period: *d, residues }
            })
            .filter(|c| c.residues.iter().any(|&r| r))
            .collect();
        let cnf = assemble(&member, tail, &cycles);
        if cnf.language() == l {
            let decided = |m: usize| cycles.iter().any(|c| c.residues[m % c.period]);
            let mut t = tail;
            while t > 0 && decided(t - 1) == member[t - 1] {
                t -= 1;
            }
            // a branching or empty tail needs its own initial state
            if t == 0 && cycles.len() != 1 {
                t = 1;
            }
            let cnf = assemble(&member, t, &cycles);
            if cnf.language() != l {
                return Err(Error::Check("shortened normal form is not equivalent".into()));
            }
            return Ok(cnf);
        }
        tail *= 2;
    }
}

/// The shape of [`chrobak_normal_form`]: one initial state, at most one state with
/// several successors, and every successor of that state on its own cycle.
pub fn is_chrobak_normal_form(n: &Nfa) -> bool {
    if n.n_symbols() != 1 || n.initial().len() != 1 {
        return false;
    }
    let branching: Vec<u32> = (0..n.n_states() as u32)
        .filter(|&q| n.successors(q, 0).len() > 1)
        .collect();
    let Some(&choice) = branching.first() else {
        return true;
    };
    if branching.len() > 1 {
        return false;
    }
    // follow each successor: it must return to itself through states of out-degree one,
    // never meeting another branch
    let mut used = FixedBitSet::with_capacity(n.n_states());
    for &start in n.successors(choice, 0) {
        let mut q = start;
        loop {
            if q == choice || used.put(q as usize) {
                return false;
            }
            match n.successors(q, 0) {
                [next] => q = *next,
                _ => return false,
            }
            if q == start {
                break;
            }
        }
    }
    true
}

/// Replaces the cycles of a normal form by a union of cycles whose periods divide the
/// period of the language they accept, which makes the result atomic. The cycles accept a
/// derivative `u⁻¹L` that is cyclic; a cycle of period `e` keeps every residue mod `e`
/// whose whole class lies in `u⁻¹L`, and the cheapest set of such cycles covering `u⁻¹L`
/// is chosen. The result never has more states than the input.
pub fn chrobak_to_atomic(n: &Nfa) -> Result<Nfa> {
    require_unary(n)?;
    if !is_chrobak_normal_form(n) {
        return Err(Error::Precondition("nfa is not in Chrobak normal form".into()));
    }
    // tail: the path from the initial state up to and including the choice state
    let mut tail_states = vec![n.initial()[0]];
    let mut on_tail = FixedBitSet::with_capacity(n.n_states());
    on_tail.insert(tail_states[0] as usize);
    loop {
        let q = *tail_states.last().unwrap();
        match n.successors(q, 0) {
            [next] if !on_tail[*next as usize] => {
                on_tail.insert(*next as usize);
                tail_states.push(*next);
            }
            _ => break,
        }
    }
    let last = *tail_states.last().unwrap();
    let succ = n.successors(last, 0);
    let (tail, cycle_starts): (usize, Vec<u32>) = if succ.len() == 1 && on_tail[succ[0] as usize] {
        // the tail closes into a single cycle: re-root at the cycle entry
        let entry = tail_states.iter().position(|&q| q == succ[0]).unwrap();
        tail_states.truncate(entry);
        (entry, vec![succ[0]])
    } else {
        (tail_states.len(), succ.to_vec())
    };
    let member: Vec<bool> = tail_states.iter().map(|&q| n.is_final(q)).collect();
    // cyclic part as a set of offsets from the first cycle length
    let mut periods = Vec::new();
    let mut cycles = Vec::new();
    for &s in &cycle_starts {
        let mut accept = vec![n.is_final(s)];
        let mut q = n.successors(s, 0)[0];
        while q != s {
            accept.push(n.is_final(q));
            q = n.successors(q, 0)[0];
        }
        periods.push(accept.len());
        cycles.push(accept);
    }
    let lcm = periods.iter().fold(1, |acc, &d| acc / gcd(acc, d) * d);
    let offsets: Vec<bool> = (0..lcm).map(|m| cycles.iter().any(|c| c[m % c.len()])).collect();
    let period = (1..=lcm)
        .find(|&p| lcm % p == 0 && (0..lcm).all(|m| offsets[m] == offsets[m % p]))
        .unwrap_or(1);
    // maximal cycle for each divisor e of the period: offsets r (mod e) whose class is inside
    let divisors: Vec<usize> = (1..=period).filter(|e| period % e == 0).collect();
    let maximal: Vec<Vec<bool>> = divisors
        .iter()
        .map(|&e| (0..e).map(|r| (r..period).step_by(e).all(|m| offsets[m])).collect())
        .collect();
    let mut best: Option<(usize, u32)> = None;
    for choice in 0u32..1 << divisors.len() {
        let cost: usize = (0..divisors.len())
            .filter(|&i| choice >> i & 1 == 1)
            .map(|i| divisors[i])
            .sum();
        let covers = (0..period)
            .all(|m| !offsets[m] || (0..divisors.len()).any(|i| choice >> i & 1 == 1 && maximal[i][m % divisors[i]]));
        if covers && best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, choice));
        }
    }
    let (_, choice) = best.expect("the whole period is always a cover");
    let new_cycles: Vec<Cycle> = (0..divisors.len())
        .filter(|&i| choice >> i & 1 == 1 && maximal[i].iter().any(|&r| r))
        .map(|i| {
            let e = divisors[i];
            // absolute residues: length tail + r lies in the cycle part iff r does
            let mut residues = vec![false; e];
            for r in 0..e {
                residues[(tail + r) % e] = maximal[i][r];
            }
            Cycle { period: e, residues }
        })
        .collect();
    // a branching start needs a state of its own, deciding length 0
    let (member, tail) = if tail == 0 && new_cycles.len() != 1 {
        (vec![offsets[0]], 1)
    } else {
        (member, tail)
    };
    let out = assemble(&member, tail, &new_cycles);
    if out.language() != n.language() {
        return Err(Error::Check("atomic replacement is not equivalent".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::is_atomic;
    use proptest::prelude::*;

    fn cycle(d: u32, finals: &[u32]) -> Nfa {
        let mut n = Nfa::new(1, d as usize);
        for q in 0..d {
            n.add_transition(q, 0, (q + 1) % d);
        }
        n.set_initial([0]);
        n.set_final(finals.iter().copied());
        n
    }

    #[test]
    fn single_cycle_is_unchanged() {
        let n = cycle(3, &[1]);
        let cnf = chrobak_normal_form(&n).unwrap();
        assert!(cnf.isomorphism(&n).is_some(), "{cnf:?}");
    }

    #[test]
    fn periods_of_components() {
        // cycles of lengths 4 and 2
        let mut n = cycle(4, &[0]);
        n.add_transition(1, 0, 0);
        let comps = cyclic_components(&n);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].1, 2);
    }

    #[test]
    fn unary_example_normal_form() {
        let f = crate::fixtures::load("F_U5").unwrap();
        let n = f.nfa.unwrap();
        let cnf = chrobak_normal_form(&n).unwrap();
        assert!(is_chrobak_normal_form(&cnf));
        assert_eq!(cnf.language(), f.language);
        // independent oracle: membership of every length up to twice the product of sizes
        for m in 0..2 * n.n_states() * cnf.n_states() {
            assert_eq!(cnf.accepts(&vec![0; m]), m != 5);
        }
        assert!(is_atomic(&chrobak_to_atomic(&cnf).unwrap()));
    }

    #[test]
    fn non_unary_is_rejected() {
        assert!(matches!(
            chrobak_normal_form(&Nfa::new(2, 1)),
            Err(Error::Precondition(_))
        ));
    }

    fn arb_unary_nfa() -> impl Strategy<Value = Nfa> {
        (1usize..=8).prop_flat_map(|n| {
            let m = n as u32;
            (
                proptest::collection::vec((0..m, 0..m), 0..=2 * n),
                proptest::collection::vec(0..m, 1..=2),
                proptest::collection::vec(0..m, 0..=n),
            )
                .prop_map(move |(edges, init, fin)| {
                    let mut a = Nfa::new(1, n);
                    for (p, q) in edges {
                        a.add_transition(p, 0, q);
                    }
                    a.set_initial(init);
                    a.set_final(fin);
                    a
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn normal_form_is_equivalent_small_and_atomic_after_replacement(n in arb_unary_nfa()) {
            let cnf = chrobak_normal_form(&n).unwrap();
            prop_assert!(is_chrobak_normal_form(&cnf));
            prop_assert_eq!(cnf.language(), n.language());
            prop_assert!(cnf.n_states() <= CNF_CONSTANT * n.n_states() * n.n_states());
            let atomic = chrobak_to_atomic(&cnf).unwrap();
            prop_assert!(atomic.n_states() <= cnf.n_states());
            prop_assert_eq!(atomic.language(), n.language());
            prop_assert!(is_atomic(&atomic));
        }
    }
}
