use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use fpg_bench::{face_graph, random_points};
use fpg_core::geometry::{build_face_graph, delaunay_triangulate};
use fpg_core::model::{model_backward, model_forward, predict_logits, FpgModel, ModelConfig};
use fpg_core::numerics::cross_entropy;

fn geometry(c: &mut Criterion) {
    let pts = random_points(1, 26);
    c.bench_function("delaunay_26", |b| {
        b.iter(|| delaunay_triangulate(black_box(&pts)).unwrap())
    });
    c.bench_function("face_graph_26", |b| {
        b.iter(|| build_face_graph(black_box(&pts), 13).unwrap())
    });
}

fn model(c: &mut Criterion) {
    let g = face_graph(2);
    let model = FpgModel::new(ModelConfig::default(), 0).unwrap();
    let input = model.prepare(&g).unwrap();
    c.bench_function("forward", |b| {
        b.iter(|| predict_logits(black_box(&input), &model).unwrap())
    });
    c.bench_function("forward_backward", |b| {
        b.iter(|| {
            let (logits, cache) = model_forward(black_box(&g), &model).unwrap();
            let (_, grad) = cross_entropy(logits, 1);
            model_backward(&model, &cache, grad).unwrap()
        })
    });
    c.bench_function("prepare_graph", |b| {
        b.iter_batched(
            || face_graph(3),
            |g| model.prepare(&g).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, geometry, model);
criterion_main!(benches);
