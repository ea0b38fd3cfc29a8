//! Sequential vs parallel throughput on the two stream-bound workloads:
//! exhaustive countermodel search and the axiom soundness sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use imstit_core::formula::{parse, AgentId};
use imstit_core::model::ModelBounds;
use imstit_core::semantics::find_countermodel_seq;
use imstit_core::soundness::axiom_soundness_sweep_seq;
use std::hint::black_box;

fn countermodel_search(c: &mut Criterion) {
    // Two variables: the stream grows to ~356k models, enough for the
    // parallel split to matter.
    let bounds = ModelBounds {
        max_moments: 3,
        agents: vec![AgentId::from("a")],
        vars: vec!["p".to_string(), "q".to_string()],
        max_family: 2,
        ..ModelBounds::default()
    };
    // A valid formula: the search exhausts the whole stream.
    let f = parse("S (p & q) -> p", &bounds.agents).unwrap().desugar();
    let mut group = c.benchmark_group("search_exhaustive");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| black_box(find_countermodel_seq(&f, &bounds).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        use imstit_core::semantics::find_countermodel_par;
        b.iter(|| black_box(find_countermodel_par(&f, &bounds).unwrap()))
    });
    group.finish();
}

fn soundness_sweep(c: &mut Criterion) {
    let bounds = ModelBounds {
        max_moments: 3,
        agents: vec![AgentId::from("a")],
        vars: vec!["p".to_string()],
        max_family: 1,
        ..ModelBounds::default()
    };
    let mut group = c.benchmark_group("axiom_sweep");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| black_box(axiom_soundness_sweep_seq(&bounds).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        use imstit_core::soundness::axiom_soundness_sweep_par;
        b.iter(|| black_box(axiom_soundness_sweep_par(&bounds).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, countermodel_search, soundness_sweep);
criterion_main!(benches);
