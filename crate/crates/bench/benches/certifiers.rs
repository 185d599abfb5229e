use std::hint::black_box;
use std::sync::Arc;

use bisubdiv::good_embed::{extend_leaf, verify_good};
use bisubdiv::joinedness::{extract_expander, is_alpha_joined};
use bisubdiv::quasirandom::{check_discrepancy, sample_host, DiscrepancyMode, QuasiParams};
use bisubdiv::subdiv::{embed_subdivision, EmbedOptions};
use bisubdiv::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_host");
    for n in [256, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_host(n, 0.1, black_box(3)))
        });
    }
    g.finish();
}

fn discrepancy(c: &mut Criterion) {
    let g = sample_host(14, 0.5, 1);
    let q = QuasiParams {
        n_part: 14,
        p: 0.5,
        epsilon: 0.1,
        delta: 0.5,
        c3n: 7,
    };
    c.bench_function("discrepancy_exhaustive_14", |b| {
        b.iter(|| {
            check_discrepancy(&g, &q, DiscrepancyMode::Exhaustive, &mut Budget::default()).unwrap()
        })
    });
}

fn joinedness(c: &mut Criterion) {
    let g = sample_host(18, 0.8, 2);
    let alpha = Alpha::reciprocal(6).unwrap();
    c.bench_function("is_alpha_joined_18", |b| {
        b.iter(|| is_alpha_joined(&g, alpha, &mut Budget::default()).unwrap())
    });
    c.bench_function("extract_expander_18", |b| {
        b.iter(|| extract_expander(&g, alpha, YChoice::First, &mut Budget::default()))
    });
}

fn goodness(c: &mut Criterion) {
    let host = Arc::new(BipartiteGraph::complete(24, 24));
    let mut e = Embedding::empty(host);
    let w = e.add_isolated(VertexRef::one(0)).unwrap();
    e.attach_leaf(w, 0).unwrap();
    let mut g = c.benchmark_group("verify_good_k24");
    for n in [2, 4, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                verify_good(&e, n, 2, GoodnessMode::Exhaustive, &mut Budget::default()).unwrap()
            })
        });
    }
    g.finish();
    c.bench_function("extend_leaf_certified_k24", |b| {
        b.iter(|| extend_leaf(&e, w, 2, 3, ExtendMode::Certified, &mut Budget::default()).unwrap())
    });
}

fn embedding(c: &mut Criterion) {
    let host = BipartiteGraph::complete(512, 512);
    let spec = SubdivisionSpec::uniform(BaseGraph::single_edge(), 14).unwrap();
    let alpha = Alpha::reciprocal(32).unwrap();
    let opts = EmbedOptions {
        degree: Some(3),
        ..EmbedOptions::default()
    };
    let mut g = c.benchmark_group("embed_subdivision");
    g.sample_size(10);
    g.bench_function("k2_sigma14_n512", |b| {
        b.iter(|| embed_subdivision(&host, &spec, alpha, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    sampling,
    discrepancy,
    joinedness,
    goodness,
    embedding
);
criterion_main!(benches);
