use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use netcone_core::chambers::{initial_chamber, is_full_dimensional, nefify, random_walk};
use netcone_core::verifier::{build_k0, curv_cone, nef_cone, sample_movable, slice_cone, symmetry_group};
use netcone_core::{act, transvection, DivisorClass, MWElement, NetConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cones(c: &mut Criterion) {
    c.bench_function("curv_cone", |b| b.iter(curv_cone));
    c.bench_function("nef_cone", |b| b.iter(nef_cone));
    c.bench_function("slice_cone", |b| b.iter(slice_cone));
    let config = NetConfig::generic();
    c.bench_function("build_k0", |b| b.iter(|| build_k0(black_box(&config)).unwrap()));
}

fn action(c: &mut Criterion) {
    let y = MWElement::new([1, -2, 0, 3, 0, -1, 2]);
    let d = DivisorClass::from_ints(5, [-4, 0, -3, -3, -2, -2, -2, -2]);
    c.bench_function("act", |b| b.iter(|| act(black_box(&y), black_box(&d))));
    c.bench_function("transvection", |b| b.iter(|| transvection(black_box(&y))));
}

fn chambers(c: &mut Criterion) {
    let config = NetConfig::generic();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let samples: Vec<DivisorClass> = (0..20).map(|_| sample_movable(&mut rng, 20)).collect();
    c.bench_function("nefify_20_samples", |b| {
        b.iter(|| {
            for d in &samples {
                let _ = nefify(black_box(d), &config, 10_000);
            }
        })
    });
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let state = random_walk(&mut rng, 6);
    c.bench_function("full_dimensionality_lp", |b| b.iter(|| is_full_dimensional(black_box(&state))));
    let start = initial_chamber(&config).unwrap();
    c.bench_function("initial_full_dimensionality_lp", |b| b.iter(|| is_full_dimensional(black_box(&start))));
}

fn symmetries(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetries");
    g.sample_size(10);
    g.bench_function("symmetry_group", |b| b.iter(symmetry_group));
    g.finish();
}

criterion_group!(benches, cones, action, chambers, symmetries);
criterion_main!(benches);
