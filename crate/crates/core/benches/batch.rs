use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hopftwist::analysis::center_upto;
use hopftwist::cocycle::{axiom_check, TripleBounds};
use hopftwist::models::builtin;
use hopftwist::par::Exec;
use hopftwist::twisted::Presentation;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn cocycle_axiom(c: &mut Criterion) {
    let mut group = c.benchmark_group("axiom_check");
    group.sample_size(10);
    for name in ["heisenberg", "borel"] {
        let m = builtin(name).unwrap();
        let bounds = TripleBounds::total(2);
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &exec, |b, &exec| {
                b.iter(|| black_box(axiom_check(&m.group, &m.cocycle, &bounds, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn center(c: &mut Criterion) {
    let mut group = c.benchmark_group("center");
    group.sample_size(10);
    for (name, degree, torus_box) in [("quantum-torus-root3", 3, 4), ("heisenberg", 4, 4)] {
        let m = builtin(name).unwrap();
        let p = Presentation::derive(&m.group, &m.cocycle).unwrap();
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &exec, |b, &exec| {
                b.iter(|| black_box(center_upto(&p, degree, torus_box, exec).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, cocycle_axiom, center);
criterion_main!(benches);
