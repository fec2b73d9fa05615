use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hardyops::operators::{assemble, spectral, OperatorKind};
use hardyops::verify::{check_projection_identity, check_rto_defect, VerifyConfig};
use hardyops::{AssemblyConfig, InnerFunction, Symbol, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn inputs() -> (Symbol, InnerFunction, InnerFunction) {
    let phi = Symbol::from_terms(&[(-2, c(0.3, -0.5)), (-1, c(0.1, 0.9)), (0, c(-0.4, 0.2)), (3, c(0.7, 0.7))]);
    let eta = InnerFunction::blaschke(&[c(0.1, 0.5), c(-0.6, 0.0)]).unwrap();
    let theta = InnerFunction::blaschke(&[c(0.5, 0.2), c(-0.3, -0.7), c(0.0, 0.4)]).unwrap();
    (phi, eta, theta)
}

fn assembly(c: &mut Criterion) {
    let (phi, eta, theta) = inputs();
    let mut group = c.benchmark_group("assemble");
    for kind in [OperatorKind::Toeplitz, OperatorKind::Rto, OperatorKind::Rho, OperatorKind::Btto] {
        for n in [50, 100, 200] {
            let cfg = AssemblyConfig::new(n);
            group.bench_with_input(BenchmarkId::new(kind.as_str(), n), &cfg, |b, cfg| {
                b.iter(|| assemble(kind, &phi, &eta, &theta, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn checks(c: &mut Criterion) {
    let (phi, eta, theta) = inputs();
    let mut group = c.benchmark_group("checks");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    for n in [50, 200] {
        let cfg = VerifyConfig::new(n);
        group.bench_with_input(BenchmarkId::new("projection_identity", n), &cfg, |b, cfg| {
            b.iter(|| check_projection_identity(&theta, cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rto_defect", n), &cfg, |b, cfg| {
            b.iter(|| check_rto_defect(&phi, &eta, &theta, cfg).unwrap())
        });
    }
    let toeplitz = assemble(OperatorKind::Toeplitz, &phi, &eta, &theta, &AssemblyConfig::new(200)).unwrap();
    group.bench_function("spectral/toeplitz_201", |b| b.iter(|| spectral(&toeplitz, 1e-8)));
    group.finish();
}

criterion_group!(benches, assembly, checks);
criterion_main!(benches);
