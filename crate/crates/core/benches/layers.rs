use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hexasort::engine::{Graph, Instance, Stack, Variant};
use hexasort::harness::{suite_cases, BenchSuite};
use hexasort::solvers::{dp_solve, SearchLimits};

fn two_color_grid() -> Instance {
    let seq = (0..16)
        .map(|k| Stack::new(k % 2, 1 + (k * 7) % 4))
        .collect();
    let edges = [
        (0, 1),
        (1, 2),
        (3, 4),
        (4, 5),
        (6, 7),
        (7, 8),
        (0, 3),
        (3, 6),
        (1, 4),
        (4, 7),
        (2, 5),
        (5, 8),
    ];
    Instance::new(Graph::new(9, &edges).unwrap(), 5, seq).unwrap()
}

fn layered_dp(c: &mut Criterion) {
    let mut cases: Vec<(String, Instance, Variant)> = suite_cases(BenchSuite::Ladder, 0)
        .into_iter()
        .filter(|case| case.instance.vertex_count() >= 7)
        .map(|case| (case.name, case.instance, Variant::Fitting))
        .collect();
    cases.push(("grid-3x3".into(), two_color_grid(), Variant::Fitting));

    let mut group = c.benchmark_group("dp_solve");
    group.sample_size(10);
    for (name, inst, variant) in &cases {
        for (mode, limits) in [
            ("parallel", SearchLimits::default()),
            ("sequential", SearchLimits::default().sequential()),
        ] {
            group.bench_with_input(BenchmarkId::new(mode, name), inst, |b, inst| {
                b.iter(|| dp_solve(black_box(inst), *variant, &limits).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, layered_dp);
criterion_main!(benches);
