use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use h2ror::{hardy, linalg, models, rgd, Mat, RunConfig};

fn sylvester(c: &mut Criterion) {
    let h = models::random_stable(1, 60, 2, 2).unwrap();
    let hk = models::default_rom0(6, 2, 2);
    let m: Mat = h.b() * hk.b().transpose();
    c.bench_function("sylvester n=60 r=6", |b| {
        b.iter(|| linalg::solve_sylvester(black_box(h.a()), h.e(), hk.a(), hk.e(), &m).unwrap())
    });
    let small = Mat::from_fn(8, 8, |i, j| if i == j { -1.0 - i as f64 } else { 0.1 });
    let rhs = Mat::identity(8, 4);
    let (ah, eh) = (Mat::from_diagonal_element(4, 4, -2.0), Mat::identity(4, 4));
    c.bench_function("sylvester n=8 r=4", |b| {
        b.iter(|| linalg::solve_sylvester(black_box(&small), &Mat::identity(8, 8), &ah, &eh, &rhs).unwrap())
    });
}

fn norm(c: &mut Criterion) {
    let h = models::random_stable(2, 60, 2, 2).unwrap();
    c.bench_function("h2 norm n=60", |b| b.iter(|| hardy::h2_norm(black_box(&h)).unwrap()));
}

fn irka2(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let ex1 = models::example1();
    let rom0 = models::diagonal_rom(&[-1.0, -2.0], 1, 1);
    c.bench_function("irka2 example1 r=2", |b| b.iter(|| rgd::irka2(black_box(&ex1), &rom0, &cfg).unwrap()));
    let h = models::random_stable(3, 60, 2, 2).unwrap();
    let rom0 = models::default_rom0(6, 2, 2);
    let cfg = RunConfig { maxit: 20, ..cfg };
    let mut group = c.benchmark_group("large");
    group.sample_size(10);
    group.bench_function("irka2 random n=60 r=6", |b| b.iter(|| rgd::irka2(black_box(&h), &rom0, &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, sylvester, norm, irka2);
criterion_main!(benches);
