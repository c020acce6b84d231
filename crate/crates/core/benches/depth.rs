use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geodepth::depth::{empirical_depth_batch, empirical_depth_batch_seq, population_depth_mc_batch};
use geodepth::samplers::preset;
use geodepth::RngStream;

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("empirical_batch");
    group.sample_size(10);
    for name in ["gauss-k5", "sphere-vmf", "spd-wishart"] {
        let p = preset(name).unwrap();
        let ds = geodepth::samplers::sample(&p.manifold, &p.sampler, &mut RngStream::new(1), 300).unwrap();
        let queries = &ds.points()[..100];
        group.bench_with_input(BenchmarkId::new("parallel", name), &ds, |b, ds| {
            b.iter(|| empirical_depth_batch(black_box(ds), queries).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", name), &ds, |b, ds| {
            b.iter(|| empirical_depth_batch_seq(black_box(ds), queries).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("population_mc");
    group.sample_size(10);
    let p = preset("sphere-vmf").unwrap();
    let grid = geodepth::asymptotics::sample_grid(&p.manifold, &p.sampler, 20, 3).unwrap();
    group.bench_function("sphere-vmf/100k-pairs", |b| {
        b.iter(|| population_depth_mc_batch(&p.manifold, &p.sampler, black_box(&grid), 100_000, 9).unwrap())
    });
    group.finish();
}

criterion_group!(benches, batch, monte_carlo);
criterion_main!(benches);
