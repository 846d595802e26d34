use evtlab_core::linear_evt::{classify_type, estimate_rho, limit_cdf, normalized_maxima, EvtType};
use evtlab_core::maxima::{MaxLaw, MaxSampler};
use evtlab_core::nonlinear_evt::build_g_n;
use evtlab_core::stats::{ks_one_sample, ks_two_sample};
use evtlab_core::{Distribution, RandomStream, Significance};

fn pareto2() -> Distribution {
    Distribution::pareto(2.0).unwrap()
}

fn exponential() -> Distribution {
    Distribution::exponential(1.0).unwrap()
}

fn rep_maxima(base: &Distribution, n: u64, count: usize, seed: u64) -> Vec<f64> {
    let law = MaxLaw::new(base.clone(), n).unwrap();
    law.sample(
        &mut RandomStream::new(seed),
        MaxSampler::ExponentialRep,
        count,
    )
    .unwrap()
}

#[test]
fn pareto_maxima_scale_to_frechet() {
    let n = 1000u64;
    let m = rep_maxima(&pareto2(), n, 20_000, 11);
    let scaled: Vec<f64> = m.iter().map(|x| x / (n as f64).sqrt()).collect();
    let r = ks_one_sample(
        &scaled,
        |x| if x <= 0.0 { 0.0 } else { (-x.powi(-2)).exp() },
        Significance::OnePercent,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn exponential_maxima_shift_to_gumbel() {
    let n = 1000u64;
    let m = rep_maxima(&exponential(), n, 20_000, 12);
    let shifted: Vec<f64> = m.iter().map(|x| x - (n as f64).ln()).collect();
    let r = ks_one_sample(&shifted, |x| (-(-x).exp()).exp(), Significance::OnePercent).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn uniform_gaps_are_exponential() {
    let n = 1000u64;
    let m = rep_maxima(&Distribution::standard_uniform(), n, 20_000, 13);
    let gaps: Vec<f64> = m.iter().map(|x| n as f64 * (1.0 - x)).collect();
    let r = ks_one_sample(
        &gaps,
        |x| if x <= 0.0 { 0.0 } else { -(-x).exp_m1() },
        Significance::OnePercent,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn estimated_rho_classifies_the_three_types() {
    let eps: Vec<f64> = (0..8)
        .map(|i| 1e-2 * 0.1f64.powf(i as f64 * 4.0 / 7.0))
        .collect();
    for (dist, family) in [
        (Distribution::standard_uniform(), EvtType::Weibull),
        (exponential(), EvtType::Gumbel),
        (pareto2(), EvtType::Frechet),
    ] {
        let est = estimate_rho(&dist, &eps, 2.0).unwrap();
        assert_eq!(
            classify_type(est.rho, 1e-2).unwrap().family,
            family,
            "{}",
            dist.name()
        );
    }
}

#[test]
fn samplers_agree_for_every_family() {
    let bases = [
        Distribution::standard_uniform(),
        exponential(),
        pareto2(),
        Distribution::standard_normal(),
        Distribution::geometric(0.5).unwrap(),
    ];
    for base in &bases {
        for n in [2u64, 10, 100] {
            let law = MaxLaw::new(base.clone(), n).unwrap();
            let passes = (0..10u64)
                .filter(|&seed| {
                    let mut s = RandomStream::substream(seed, n);
                    let a = law.sample(&mut s, MaxSampler::Direct, 2_000).unwrap();
                    let b = law
                        .sample(&mut s, MaxSampler::ExponentialRep, 2_000)
                        .unwrap();
                    let r = ks_two_sample(&a, &b, Significance::OnePercent).unwrap();
                    r.pass
                })
                .count();
            assert!(passes >= 9, "{} n={n}: {passes}/10", base.name());
        }
    }
}

#[test]
fn normalized_maxima_approach_the_limit_law() {
    for (dist, rho) in [
        (Distribution::standard_uniform(), 1.0),
        (exponential(), 0.0),
        (pareto2(), -0.5),
    ] {
        let (_, z) = normalized_maxima(&dist, 10_000, 20_000, &mut RandomStream::new(7)).unwrap();
        let r = ks_one_sample(&z, |x| limit_cdf(rho, x), Significance::OnePercent).unwrap();
        assert!(r.statistic <= 0.02, "{}: {}", dist.name(), r.statistic);
    }
}

#[test]
fn quantile_construction_hits_each_target() {
    let n = 10_000u64;
    let base = Distribution::standard_uniform();
    for target in [
        Distribution::standard_uniform(),
        exponential(),
        Distribution::standard_normal(),
    ] {
        let g = build_g_n(&target, n).unwrap();
        let m = rep_maxima(&base, n, 20_000, 21);
        let y: Vec<f64> = m.iter().map(|&x| g(x).unwrap()).collect();
        let r = ks_one_sample(&y, |x| target.cdf(x), Significance::OnePercent).unwrap();
        assert!(r.statistic <= 0.02, "{}: {}", target.name(), r.statistic);
    }
}
