//! Benchmarks for the hot paths: the ordered-tuple subembedding search,
//! set-level defect over all orderings, glued distances, and triangle
//! defect sampling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use roughcat_core::glue::{glued_distance, ConvexPolygon, GluedPolygon};
use roughcat_core::metric::{GraphMetric, GraphSpace};
use roughcat_core::plane::Point2;
use roughcat_core::rcat::{rcat_space_defect, HParams};
use roughcat_core::subembed::{minimal_defect_ordered, minimal_defect_set, SearchParams};

fn cycle_table(n: usize) -> Vec<Vec<f64>> {
    let g = GraphMetric::new(GraphSpace::cycle(n.max(5) * 2, 8.0)).unwrap();
    (0..n)
        .map(|i| (0..n).map(|j| g.metric().d(2 * i, 2 * j)).collect())
        .collect()
}

fn bench_ordered_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_defect_ordered");
    for n in [4usize, 5, 6] {
        let table = cycle_table(n);
        let params = SearchParams { seed: 9, ..SearchParams::default() };
        group.bench_with_input(BenchmarkId::from_parameter(n), &table, |b, t| {
            b.iter(|| minimal_defect_ordered(std::hint::black_box(t), &params).unwrap())
        });
    }
    group.finish();
}

fn bench_set_defect(c: &mut Criterion) {
    let g = GraphMetric::new(GraphSpace::cycle(12, 6.0)).unwrap();
    let params = SearchParams { seed: 9, ..SearchParams::default() };
    c.bench_function("minimal_defect_set_5_of_cycle", |b| {
        b.iter(|| {
            minimal_defect_set(
                std::hint::black_box(g.metric()),
                &[0, 2, 5, 7, 10],
                &params,
                None,
            )
            .unwrap()
        })
    });
}

fn bench_glued_distance(c: &mut Criterion) {
    let q1 = ConvexPolygon::new(vec![
        Point2::new(-1.0, 0.0),
        Point2::new(0.0, 0.0),
        Point2::new(0.0, 1.0),
        Point2::new(-1.0, 1.0),
    ])
    .unwrap();
    let q2 = ConvexPolygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    let g = GluedPolygon::new(q1, q2, (Point2::new(0.0, 0.0), Point2::new(0.0, 1.0))).unwrap();
    let a = Point2::new(-0.7, 0.2);
    let b = Point2::new(0.8, 0.9);
    c.bench_function("glued_distance_cross_seam", |bch| {
        bch.iter(|| glued_distance(&g, std::hint::black_box(a), std::hint::black_box(b)).unwrap())
    });
}

fn bench_rcat_defect(c: &mut Criterion) {
    let g = GraphMetric::new(GraphSpace::cycle(24, 6.0)).unwrap();
    let params = HParams::standard();
    c.bench_function("rcat_space_defect_cycle24", |b| {
        b.iter(|| rcat_space_defect(std::hint::black_box(&g), 200, 9, &params).unwrap())
    });
}

criterion_group!(
    benches,
    bench_ordered_search,
    bench_set_defect,
    bench_glued_distance,
    bench_rcat_defect
);
criterion_main!(benches);
