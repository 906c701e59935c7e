//! Benchmarks for the hot paths: the exact recursive solver, the branching
//! solver on a graph past its cutoff, the separating family construction,
//! and the two model checking routes for the hardness formula.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use elimdist_core::distance::{ed_conn, ed_le};
use elimdist_core::fixture::random_connected_graph;
use elimdist_core::fpt::solve_unbreakable;
use elimdist_core::modelcheck::{models, CatalogFormula};
use elimdist_core::separation::build_family;
use elimdist_core::{Graph, Variant};

/// (1,1)-unbreakable graph on 11 vertices, one above cutoff(1,1) = 10, so
/// the solver must run the family pipeline instead of the exact scan.
fn eleven_vertex_fixture() -> Graph {
    let mut g = Graph::edgeless(11);
    g.add_edge(0, 10).unwrap();
    for v in 1..=8 {
        g.add_edge(0, v).unwrap();
    }
    for v in 2..=9 {
        g.add_edge(1, v).unwrap();
    }
    g
}

fn bench_exact_conn(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let g = random_connected_graph(10, 0.3, &mut rng);
    let f = CatalogFormula::DiameterLe2;
    c.bench_function("ed_conn exact, random 10 vertices", |b| {
        b.iter(|| black_box(ed_conn(black_box(&g), &f)))
    });
}

fn bench_unbreakable_pipeline(c: &mut Criterion) {
    let g = eleven_vertex_fixture();
    let f = CatalogFormula::DiameterLe2.formula().pad_to_sigma3().unwrap();
    assert!(g.is_unbreakable(1, 1));
    c.bench_function("solve_unbreakable past the cutoff", |b| {
        b.iter(|| {
            let out = solve_unbreakable(black_box(&g), &f, 1, 1, Variant::Conn).unwrap();
            black_box(out.holds)
        })
    });
}

fn bench_exact_oracle_on_fixture(c: &mut Criterion) {
    let g = eleven_vertex_fixture();
    let f = CatalogFormula::DiameterLe2.formula().pad_to_sigma3().unwrap();
    c.bench_function("ed_le exact oracle on the same fixture", |b| {
        b.iter(|| black_box(ed_le(black_box(&g), &f, Variant::Conn, 1)))
    });
}

fn bench_family_construction(c: &mut Criterion) {
    c.bench_function("build_family n=256 a=2 b=2", |b| {
        b.iter(|| black_box(build_family(black_box(256), 2, 2).size()))
    });
}

fn bench_model_checking(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let g = random_connected_graph(7, 0.35, &mut rng);
    let hard = CatalogFormula::HardnessDist2Degree1;
    let generic = hard.formula();
    c.bench_function("hardness formula, generic evaluator", |b| {
        b.iter(|| black_box(models(black_box(&g).full(), &generic)))
    });
    c.bench_function("hardness formula, specialized checker", |b| {
        b.iter(|| black_box(hard.models(black_box(&g).full())))
    });
}

criterion_group!(
    benches,
    bench_exact_conn,
    bench_unbreakable_pipeline,
    bench_exact_oracle_on_fixture,
    bench_family_construction,
    bench_model_checking
);
criterion_main!(benches);
