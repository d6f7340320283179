use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use fracwalk_bench::{diagonal, gaussian_ball, source_ball, unit_cube};
use fracwalk_core::{estimate, run_walk, Point, RngStream};

fn single_walks(c: &mut Criterion) {
    let mut g = c.benchmark_group("walk");
    for (n, s) in [(2usize, 0.5), (3, 0.75), (10, 0.5)] {
        let p = gaussian_ball(n, s);
        let x0 = diagonal(n, 0.6);
        let mut idx = 0;
        g.bench_with_input(BenchmarkId::new("boundary data", format!("n={n} s={s}")), &x0, |b, x0| {
            b.iter(|| {
                idx += 1;
                run_walk(&p, x0, &mut RngStream::new(7, idx)).unwrap()
            })
        });
        let p = source_ball(n, s);
        g.bench_with_input(BenchmarkId::new("source", format!("n={n} s={s}")), &x0, |b, x0| {
            b.iter(|| {
                idx += 1;
                run_walk(&p, x0, &mut RngStream::new(7, idx)).unwrap()
            })
        });
    }
    g.finish();
}

fn estimator(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimate 4096 walks");
    g.sample_size(10).throughput(Throughput::Elements(4096));
    let ball = gaussian_ball(3, 0.5);
    let x0 = diagonal(3, 0.6);
    g.bench_function("ball n=3", |b| b.iter(|| estimate(&ball, &x0, 4096, 1, 0).unwrap()));
    let cube = unit_cube(10, 0.5);
    let x0 = Point::splat(10, 0.1).unwrap();
    g.bench_function("cube n=10", |b| b.iter(|| estimate(&cube, &x0, 4096, 1, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, single_walks, estimator);
criterion_main!(benches);
