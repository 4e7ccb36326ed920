use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nsc_bench::shift_language;
use nsc_core::complexity::{bipartite_dimension, chrobak_normal_form, dependency, ns_search, SearchBudget};
use nsc_core::fixtures;
use nsc_core::jsl_automata::{duality, minimal_jsl};
use nsc_core::monoids::{syntactic_monoid, MONOID_BUDGET};

fn ns(c: &mut Criterion) {
    let mut group = c.benchmark_group("ns_search");
    for n in 1..=3 {
        let l = shift_language(n);
        group.bench_with_input(BenchmarkId::new("shift", n), &l, |b, l| {
            b.iter(|| ns_search(black_box(l), &SearchBudget::default()).unwrap())
        });
    }
    group.finish();
}

fn dimension(c: &mut Criterion) {
    let l = shift_language(4);
    let m = dependency(&l).matrix;
    c.bench_function("bipartite_dimension/shift_4", |b| {
        b.iter(|| bipartite_dimension(black_box(&m), &SearchBudget::default()).unwrap())
    });
}

fn algebra(c: &mut Criterion) {
    let sub = fixtures::load("F_SUB").unwrap();
    let rev = sub.language.reverse();
    c.bench_function("syntactic_monoid/F_SUB_reverse", |b| {
        b.iter(|| syntactic_monoid(black_box(&rev), MONOID_BUDGET).unwrap())
    });
    let m3 = fixtures::load("F_M3").unwrap();
    c.bench_function("minimal_jsl/F_M3", |b| {
        b.iter(|| minimal_jsl(black_box(&m3.language)).unwrap())
    });
}

// seconds per iteration: keep the sample small
fn duality_suite(c: &mut Criterion) {
    let ln = fixtures::load("F_LN2").unwrap();
    let nfa = ln.nfa.clone().unwrap_or_else(|| ln.language.to_nfa());
    let mut group = c.benchmark_group("duality_check_all");
    group.sample_size(10);
    group.bench_function("F_LN2", |b| b.iter(|| duality::check_all(black_box(&nfa)).unwrap()));
    group.finish();
}

fn chrobak(c: &mut Criterion) {
    let u5 = fixtures::load("F_U5").unwrap();
    let nfa = u5.nfa.unwrap();
    c.bench_function("chrobak_normal_form/F_U5", |b| {
        b.iter(|| chrobak_normal_form(black_box(&nfa)).unwrap())
    });
}

criterion_group!(benches, ns, dimension, algebra, duality_suite, chrobak);
criterion_main!(benches);
