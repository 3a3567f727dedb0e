use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sonarforge_bench::rendered;
use sonarforge_core::atr::{FeatureExtractor, Hog};
use sonarforge_core::postproc::to_grayscale;

fn bench_hog(c: &mut Criterion) {
    let img = to_grayscale(&rendered(256)).unwrap();
    let hog = Hog::default();
    c.bench_function("hog/256", |b| b.iter(|| hog.extract(black_box(&img)).unwrap()));
}

criterion_group!(benches, bench_hog);
criterion_main!(benches);
