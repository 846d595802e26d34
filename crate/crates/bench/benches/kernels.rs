use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use evtlab_core::dist::sample_quantile_transform;
use evtlab_core::geometric::oscillation_scan;
use evtlab_core::linear_evt::{default_uv_pairs, dehaan_test, limit_cdf, normalized_maxima};
use evtlab_core::maxima::{MaxLaw, MaxSampler};
use evtlab_core::stats::ks_one_sample;
use evtlab_core::{CauchyCriterion, Distribution, GeometricParams, RandomStream, Significance};

fn quantiles(c: &mut Criterion) {
    let families = [
        Distribution::exponential(1.0).unwrap(),
        Distribution::pareto(2.0).unwrap(),
        Distribution::standard_normal(),
        Distribution::geometric(0.5).unwrap(),
    ];
    let mut group = c.benchmark_group("quantile");
    for dist in &families {
        group.bench_function(dist.name(), |b| {
            let mut u = 0.0f64;
            b.iter(|| {
                u = (u + 0.618_033_988_749_895) % 1.0;
                dist.quantile(black_box(u.max(1e-12))).unwrap()
            })
        });
    }
    group.finish();
}

fn samplers(c: &mut Criterion) {
    let law = MaxLaw::new(Distribution::standard_normal(), 100).unwrap();
    let mut group = c.benchmark_group("max_sampler_n100_x1000");
    for (name, method) in [
        ("direct", MaxSampler::Direct),
        ("exponential", MaxSampler::ExponentialRep),
    ] {
        group.bench_function(name, |b| {
            let mut s = RandomStream::new(1);
            b.iter(|| law.sample(&mut s, method, 1000).unwrap())
        });
    }
    group.finish();
    c.bench_function("quantile_transform_normal_x10000", |b| {
        let dist = Distribution::standard_normal();
        let mut s = RandomStream::new(2);
        b.iter(|| sample_quantile_transform(&dist, &mut s, 10_000).unwrap())
    });
}

fn diagnostics(c: &mut Criterion) {
    let pareto = Distribution::pareto(2.0).unwrap();
    let eps: Vec<f64> = (0..16)
        .map(|i| 1e-2 * 1e-4f64.powf(i as f64 / 15.0))
        .collect();
    let uv = default_uv_pairs();
    c.bench_function("dehaan_test_pareto", |b| {
        b.iter(|| dehaan_test(&pareto, black_box(&eps), &uv, CauchyCriterion::default()).unwrap())
    });
    let g = GeometricParams::new(0.5).unwrap();
    let ns: Vec<u64> = (0..4000)
        .map(|i| (1e3 * (1e3f64.ln() * i as f64 / 3999.0).exp()).round() as u64)
        .collect();
    c.bench_function("oscillation_scan_4000", |b| {
        b.iter(|| oscillation_scan(&g, 0, black_box(&ns), &[0.0, 0.5]).unwrap())
    });
    c.bench_function("limit_law_ks_1e4", |b| {
        let mut s = RandomStream::new(3);
        b.iter(|| {
            let (_, z) = normalized_maxima(&pareto, 10_000, 10_000, &mut s).unwrap();
            ks_one_sample(&z, |x| limit_cdf(-0.5, x), Significance::OnePercent).unwrap()
        })
    });
}

criterion_group!(benches, quantiles, samplers, diagnostics);
criterion_main!(benches);
