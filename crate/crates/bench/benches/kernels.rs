use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use sharpflat::factor::{combine_pair, factor_pair};
use sharpflat::logmatrix::{companion_product, companion_product_balanced, logmatrix_level};
use sharpflat::{Coefficient, Padic, QuadExtElem};
use sharpflat_bench::{pair_input, params, GRID};

fn padic_mul(c: &mut Criterion) {
    let pr = params(3, 3);
    let ring = pr.base_ring();
    let x = Padic::from_int(&ring, &(BigInt::from(3u32).pow(40) - 7));
    let y = Padic::from_int(&ring, &BigInt::from(2u32).pow(90));
    c.bench_function("padic_mul", |b| b.iter(|| black_box(&x).mul(black_box(&y))));
    let t = QuadExtElem::theta(pr);
    let u = t.add(&QuadExtElem::from_int(&pr, &BigInt::from(5)));
    c.bench_function("quad_mul", |b| b.iter(|| black_box(&t).mul(black_box(&u))));
}

fn series_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul_trunc");
    for deg in [9usize, 27, 81] {
        let pr = params(3, 3);
        let (_, a, b) = pair_input(&pr, deg);
        group.bench_with_input(BenchmarkId::from_parameter(deg), &deg, |bench, _| bench.iter(|| a.mul_trunc(&b).unwrap()));
    }
    group.finish();
}

fn logmatrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("logmatrix_level");
    group.sample_size(10);
    for (p, a_p) in GRID {
        let pr = params(p, a_p);
        group.bench_function(format!("p{p}_ap{a_p}_n2_deg27"), |b| {
            b.iter(|| logmatrix_level::<QuadExtElem>(&pr, 2, 27).unwrap())
        });
    }
    group.finish();
}

fn companion(c: &mut Criterion) {
    let mut group = c.benchmark_group("companion_product");
    group.sample_size(10);
    let pr = params(3, 3);
    for n in [3u32, 4, 5] {
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| b.iter(|| companion_product(&pr, n, None).unwrap()));
        group.bench_with_input(BenchmarkId::new("balanced", n), &n, |b, &n| {
            b.iter(|| companion_product_balanced(&pr, n, None).unwrap())
        });
    }
    group.finish();
}

fn factorisation(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor_pair");
    group.sample_size(10);
    for deg in [9usize, 27] {
        let pr = params(3, 3);
        let (m, a, b) = pair_input(&pr, deg);
        group.bench_with_input(BenchmarkId::new("factor", deg), &deg, |bench, _| bench.iter(|| factor_pair(&a, &b, &m).unwrap()));
        let f = factor_pair(&a, &b, &m).unwrap();
        group.bench_with_input(BenchmarkId::new("combine", deg), &deg, |bench, _| {
            bench.iter(|| combine_pair(&f.sharp, &f.flat, &m).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, padic_mul, series_mul, logmatrix, companion, factorisation);
criterion_main!(kernels);
