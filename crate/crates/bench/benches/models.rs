use std::hint::black_box;

use cocrystal_core::evolve::hypervolume;
use cocrystal_core::gbt::GbtModel;
use cocrystal_core::metrics::mann_whitney;
use cocrystal_core::rng::stream;
use criterion::{criterion_group, criterion_main, Criterion};
use rand::Rng;

fn models(c: &mut Criterion) {
    let model = GbtModel::from_text(include_str!("../../../models/h.gbt")).unwrap();
    let mut rng = stream(1, &[0]);
    let width = model.manifest.len();
    let rows: Vec<Vec<f64>> = (0..1000)
        .map(|_| (0..width).map(|_| rng.gen_range(-2.0..400.0)).collect())
        .collect();
    c.bench_function("predict_proba_1000", |b| {
        b.iter(|| {
            rows.iter()
                .map(|x| model.predict_proba(black_box(x)).unwrap())
                .sum::<f64>()
        })
    });
    let points: Vec<[f64; 3]> = (0..200)
        .map(|_| [rng.gen(), rng.gen(), rng.gen()])
        .collect();
    c.bench_function("hypervolume_200", |b| {
        b.iter(|| hypervolume(black_box(&points), &[1.0; 3]))
    });
    let a: Vec<f64> = (0..200).map(|_| rng.gen()).collect();
    let bb: Vec<f64> = (0..200).map(|_| rng.gen()).collect();
    let small_a = &a[..20];
    let small_b = &bb[..20];
    c.bench_function("mann_whitney_normal_200x200", |b| {
        b.iter(|| mann_whitney(black_box(&a), black_box(&bb)).p_greater)
    });
    c.bench_function("mann_whitney_exact_20x20", |b| {
        b.iter(|| mann_whitney(black_box(small_a), black_box(small_b)).p_greater)
    });
}

criterion_group!(benches, models);
criterion_main!(benches);
