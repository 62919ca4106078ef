use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pacflab_bench::{farima11, fractional};
use pacflab_core::szego::farima_density;
use pacflab_core::{
    factorize, farima_autocov, pacf_at_lag, pacf_via_levinson, tau_generic, BetaSequence,
    SpectralGrid, TruncationPolicy,
};

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = representation, levinson, cepstrum, taus
}
criterion_main!(benches);

fn representation(c: &mut Criterion) {
    let policy = TruncationPolicy::default();
    let mut group = c.benchmark_group("pacf_at_lag");
    for (name, spec) in [
        ("arma11", farima11(0.0)),
        ("d=0.1", fractional(0.1)),
        ("d=-0.3", fractional(-0.3)),
    ] {
        let beta = BetaSequence::from_farima(&spec, 0);
        for n in [10usize, 100] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| pacf_at_lag(black_box(&beta), n, &policy).unwrap())
            });
        }
    }
    group.finish();
}

fn levinson(c: &mut Criterion) {
    let gamma = farima_autocov(&farima11(0.3), 2000).unwrap();
    c.bench_function("levinson/2000", |b| {
        b.iter(|| pacf_via_levinson(black_box(&gamma), 2000).unwrap())
    });
}

fn cepstrum(c: &mut Criterion) {
    let spec = farima11(0.2);
    let grid = SpectralGrid::from_fn(1 << 14, |t| farima_density(&spec, t)).unwrap();
    c.bench_function("factorize/16384", |b| {
        b.iter(|| factorize(black_box(&grid), 256, 1e-6).unwrap())
    });
}

fn taus(c: &mut Criterion) {
    c.bench_function("tau_generic/6", |b| {
        b.iter(|| tau_generic(black_box(6), 16).unwrap())
    });
}
