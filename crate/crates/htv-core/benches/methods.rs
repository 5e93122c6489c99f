//! End-to-end inpainting method comparison on a 128x128 step-edge image
//! with a centered square hole.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use htv_core::baselines::{blur_inpaint, nn_inpaint, sobolev_inpaint, BlurParams, SobolevParams};
use htv_core::pyramid::{hierarchical_tv_inpaint, HierParams};
use htv_core::raster::{Mask, Position, Raster};
use htv_core::tv::{tv_inpaint, TvParams};

fn inputs() -> (Raster, Mask) {
    let n = 128;
    let samples: Vec<f64> = (0..n * n)
        .map(|i| if i % n < n / 2 { 0.15 } else { 0.85 })
        .collect();
    let u0 = Raster::from_samples(n, n, 1, samples).unwrap();
    let mut m = Mask::empty(n, n).unwrap();
    for r in 56..72 {
        for c in 56..72 {
            m.set(Position::new(r, c), true);
        }
    }
    (u0, m)
}

fn bench_methods(c: &mut Criterion) {
    let (u0, m) = inputs();
    let mut group = c.benchmark_group("inpaint_128");
    group.sample_size(10);
    group.bench_function("nn", |b| {
        b.iter(|| nn_inpaint(black_box(&u0), &m).unwrap())
    });
    group.bench_function("blur", |b| {
        b.iter(|| blur_inpaint(black_box(&u0), &m, &BlurParams::default()).unwrap())
    });
    group.bench_function("sobolev", |b| {
        b.iter(|| sobolev_inpaint(black_box(&u0), &m, &SobolevParams::default()).unwrap())
    });
    group.bench_function("tv", |b| {
        b.iter(|| tv_inpaint(black_box(&u0), &m, &TvParams::default()).unwrap())
    });
    group.bench_function("hier", |b| {
        b.iter(|| hierarchical_tv_inpaint(black_box(&u0), &m, &HierParams::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_methods);
criterion_main!(benches);
