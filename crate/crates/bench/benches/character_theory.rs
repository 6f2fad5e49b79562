//! Cold-cache timings of the main computations on corpus groups.
//!
//! ```bash
//! cargo bench -p vertexlab-bench
//! cargo bench -p vertexlab-bench -- ipi   # only the partial character benchmarks
//! ```

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use vertexlab::pistructure::navarro_vertices;
use vertexlab::verify::run_checks;
use vertexlab::{ipi_cone, ipi_via_vertices, library, CharacterTable, Check, Group, PiSet};
use vertexlab_bench::fresh;

fn groups() -> Vec<Arc<Group>> {
    vec![library::s4(), library::sl23(), library::gl23(), library::s4_x_c2()]
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("dixon_table");
    for g in groups() {
        group.bench_with_input(BenchmarkId::from_parameter(g.name()), &g, |b, g| {
            b.iter_batched(|| fresh(g), |g| CharacterTable::of(&g), BatchSize::SmallInput)
        });
    }
    group.finish();
}

fn lattices(c: &mut Criterion) {
    let mut group = c.benchmark_group("subgroup_lattice");
    for g in groups() {
        group.bench_with_input(BenchmarkId::from_parameter(g.name()), &g, |b, g| {
            b.iter_batched(|| fresh(g), |g| g.lattice().unwrap().len(), BatchSize::SmallInput)
        });
    }
    group.finish();
}

fn partial_characters(c: &mut Criterion) {
    let pi = PiSet::primes([2]);
    let mut group = c.benchmark_group("ipi");
    for g in groups() {
        // tables are shared work; warm them so only the Iπ search is timed
        let warm = |g: &Arc<Group>| {
            let g = fresh(g);
            CharacterTable::of(&g);
            g
        };
        group.bench_with_input(BenchmarkId::new("cone", g.name()), &g, |b, g| {
            b.iter_batched(|| warm(g), |g| ipi_cone(&g, &pi).unwrap().len(), BatchSize::SmallInput)
        });
        group.bench_with_input(BenchmarkId::new("via_vertices", g.name()), &g, |b, g| {
            b.iter_batched(|| warm(g), |g| ipi_via_vertices(&g, &pi).unwrap().len(), BatchSize::SmallInput)
        });
    }
    group.finish();
}

fn vertices(c: &mut Criterion) {
    let pi = PiSet::primes([2]);
    let mut group = c.benchmark_group("navarro_vertices");
    for g in groups() {
        group.bench_with_input(BenchmarkId::from_parameter(g.name()), &g, |b, g| {
            b.iter_batched(|| fresh(g), |g| navarro_vertices(&g, &pi).unwrap().len(), BatchSize::SmallInput)
        });
    }
    group.finish();
}

fn all_checks(c: &mut Criterion) {
    let pi = PiSet::primes([2]);
    let g = library::sl23();
    c.bench_function("all_checks/SL(2,3)", |b| {
        b.iter_batched(|| fresh(&g), |g| run_checks(&g, &pi, &Check::ALL).len(), BatchSize::SmallInput)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = tables, lattices, partial_characters, vertices, all_checks
}
criterion_main!(benches);
