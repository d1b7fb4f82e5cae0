use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use paley_bench::fixture;
use paley_core::{bounds, clique, paley, phi, CharacterTable, FieldSpec, PaleyGraph};

fn bench_substrate(c: &mut Criterion) {
    let mut group = c.benchmark_group("substrate");
    for &(p, k) in &[(1009, 1), (13, 3)] {
        let field = FieldSpec::new(p, k, None).unwrap();
        let chi = CharacterTable::build(&field).unwrap();
        let q = field.q();
        group.bench_with_input(BenchmarkId::new("character", q), &field, |b, f| {
            b.iter(|| CharacterTable::build(black_box(f)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("graph", q), &field, |b, f| {
            b.iter(|| PaleyGraph::build(black_box(f), &chi).unwrap())
        });
    }
    group.finish();
}

fn bench_max_clique(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_clique");
    group.sample_size(10);
    for &p in &[197u64, 1009, 2017] {
        let (_, _, g) = fixture(p, 1);
        group.bench_with_input(BenchmarkId::new("branch_and_bound", p), &g, |b, g| {
            b.iter(|| clique::max_clique(black_box(g)))
        });
    }
    let (_, _, g) = fixture(197, 1);
    group.bench_function("naive_oracle/197", |b| {
        b.iter(|| clique::max_clique_naive(black_box(&g), 200).unwrap())
    });
    group.finish();
}

fn bench_verifiers(c: &mut Criterion) {
    let (field, chi, g) = fixture(409, 1);
    let witness = clique::max_clique(&g).witness;
    c.bench_function("srg/409", |b| b.iter(|| paley::verify_srg(black_box(&g))));
    c.bench_function("phi/409", |b| {
        b.iter(|| phi::compute_phi(&field, &chi, black_box(&witness)).unwrap())
    });
    c.bench_function("poly_zero_check/409", |b| {
        b.iter(|| bounds::poly_zero_check(&field, &chi, black_box(&witness)).unwrap())
    });
    c.bench_function("classify/1e6", |b| {
        b.iter(|| bounds::classify_primes(black_box(1_000_000)))
    });
}

criterion_group!(benches, bench_substrate, bench_max_clique, bench_verifiers);
criterion_main!(benches);
