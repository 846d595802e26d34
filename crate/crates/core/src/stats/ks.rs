use serde::Serialize;

use crate::error::{EvtError, Result};

/// Significance levels with tabulated asymptotic Kolmogorov critical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Significance {
    #[serde(rename = "0.05")]
    FivePercent,
    #[serde(rename = "0.01")]
    OnePercent,
}

impl Significance {
    /// `c(alpha)` such that `P{sqrt(N) D_N > c} -> alpha`.
    pub fn critical_value(self) -> f64 {
        match self {
            Significance::FivePercent => 1.358,
            Significance::OnePercent => 1.628,
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            Significance::FivePercent => 0.05,
            Significance::OnePercent => 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n_effective: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl KsResult {
    fn new(statistic: f64, n_effective: f64, alpha: Significance) -> Self {
        let threshold = alpha.critical_value() / n_effective.sqrt();
        KsResult {
            statistic,
            n_effective,
            threshold,
            pass: statistic < threshold,
        }
    }
}

const MIN_SAMPLE: usize = 20;

fn sorted_copy(name: &str, xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(EvtError::domain(format!("{name} contains NaN")));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample KS distance between the empirical law of `samples` and `cdf`.
///
/// Both one-sided gaps are taken at every jump of the empirical cdf.
pub fn ks_one_sample<F>(samples: &[f64], cdf: F, alpha: Significance) -> Result<KsResult>
where
    F: Fn(f64) -> f64,
{
    if samples.len() < MIN_SAMPLE {
        return Err(EvtError::domain(format!(
            "one-sample KS needs at least {MIN_SAMPLE} samples, got {}",
            samples.len()
        )));
    }
    let xs = sorted_copy("sample", samples)?;
    let n = xs.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(EvtError::Contract(format!(
                "cdf({x}) = {f} lies outside [0, 1]"
            )));
        }
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(KsResult::new(d, n, alpha))
}

/// Two-sample KS distance: the sup gap between the two empirical cdfs.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: Significance) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(EvtError::domain("two-sample KS of an empty sample"));
    }
    if a.len() < MIN_SAMPLE || b.len() < MIN_SAMPLE {
        return Err(EvtError::domain(format!(
            "two-sample KS needs at least {MIN_SAMPLE} samples on each side, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let xs = sorted_copy("first sample", a)?;
    let ys = sorted_copy("second sample", b)?;
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < xs.len() && j < ys.len() {
        // advance past every copy of the smaller value on both sides
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok(KsResult::new(d, n_eff, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RandomStream;

    fn uniforms(seed: u64, n: usize) -> Vec<f64> {
        let mut s = RandomStream::new(seed);
        (0..n).map(|_| s.uniform_open()).collect()
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = uniforms(1, 100);
        let r = ks_two_sample(&a, &a, Significance::FivePercent).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        assert_eq!(r.n_effective, 50.0);
    }

    #[test]
    fn disjoint_supports_have_unit_distance() {
        let a = uniforms(2, 50);
        let b: Vec<f64> = uniforms(3, 60).iter().map(|u| u + 5.0).collect();
        let r = ks_two_sample(&a, &b, Significance::FivePercent).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn constant_sample_against_continuous_cdf() {
        let xs = vec![0.3; 40];
        let r = ks_one_sample(&xs, |x: f64| x.clamp(0.0, 1.0), Significance::FivePercent).unwrap();
        assert!(r.statistic >= 0.5);
    }

    #[test]
    fn uniform_against_exponential_fails() {
        // sup |u - (1 - e^{-u})| on (0, 1) is 1 - (1 - e^{-1}) = e^{-1} at u -> 1
        let xs = uniforms(4, 10_000);
        let r = ks_one_sample(&xs, |x: f64| 1.0 - (-x).exp(), Significance::FivePercent).unwrap();
        assert!(r.statistic > 0.3, "{}", r.statistic);
        assert!(!r.pass);
    }

    #[test]
    fn calibration_over_seeds() {
        let passes = (0..100u64)
            .filter(|&seed| {
                let xs = uniforms(1000 + seed, 100_000);
                ks_one_sample(&xs, |x| x, Significance::FivePercent)
                    .unwrap()
                    .pass
            })
            .count();
        // Binomial(100, 0.95): 88 is about three standard deviations down.
        assert!(passes >= 88, "only {passes}/100 passed");
    }

    #[test]
    fn cdf_out_of_range_is_contract_error() {
        let xs = uniforms(5, 30);
        assert!(matches!(
            ks_one_sample(&xs, |x| 2.0 * x + 1.0, Significance::OnePercent),
            Err(EvtError::Contract(_))
        ));
    }

    #[test]
    fn small_and_empty_inputs() {
        assert!(ks_one_sample(&[0.1; 5], |x| x, Significance::OnePercent).is_err());
        assert!(matches!(
            ks_two_sample(&[], &[1.0; 30], Significance::OnePercent),
            Err(EvtError::Domain(_))
        ));
    }

    #[test]
    fn thresholds() {
        let r = ks_one_sample(&uniforms(6, 10_000), |x| x, Significance::OnePercent).unwrap();
        assert!((r.threshold - 0.01628).abs() < 1e-12);
        assert_eq!(r.pass, r.statistic < r.threshold);
    }
}
