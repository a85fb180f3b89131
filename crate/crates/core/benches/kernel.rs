use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use parabolic_nf::harness::{invariance_check, random_generator, Sampler};
use parabolic_nf::lie::{self, Generator};
use parabolic_nf::nf::normalize;
use parabolic_nf::{par, FormalSeries, Grading};

fn dense(seed: u64, order: u32) -> FormalSeries {
    Sampler::new(seed).series(Grading::NONDIAG, order, 0, order, 0.8)
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for order in [24u32, 36, 48] {
        let (a, b) = (dense(1, order), dense(2, order));
        group.bench_with_input(BenchmarkId::new("sequential", order), &order, |bench, _| {
            bench.iter(|| black_box(a.mul_sequential(&b)))
        });
        group.bench_with_input(BenchmarkId::new("chunked", order), &order, |bench, _| {
            bench.iter(|| black_box(a.mul_chunked(&b, par::chunk_count())))
        });
    }
    group.finish();
}

fn trials(c: &mut Criterion) {
    let nd = Grading::NONDIAG;
    let h = FormalSeries::from_ints(nd, 16, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3), (4, 0, 1, 1, 1)]);
    let f = lie::time_one_map(&Generator::new(h).unwrap()).unwrap();
    let mut group = c.benchmark_group("invariance");
    group.sample_size(10);
    group.bench_function("sequential", |bench| {
        bench.iter(|| {
            for seed in 0..8 {
                let chi = random_generator(seed, nd, 16, 6, 12, 0.5).unwrap();
                black_box(normalize(&lie::conjugate(&f, &chi).unwrap()).unwrap());
            }
        })
    });
    group.bench_function("pool", |bench| bench.iter(|| black_box(invariance_check(&f, 8, 0).unwrap())));
    group.finish();
}

criterion_group!(benches, products, trials);
criterion_main!(benches);
