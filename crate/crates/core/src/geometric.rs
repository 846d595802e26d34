//! The geometric law and why it escapes every monotone normalization.
//!
//! For `F(t) = 1 - p^floor(t + 1)` the upper quantile is
//! `F^<-(1 - u) = floor(log u / log p)`, so the maximum of `n` draws sits on
//! the lattice `floor(theta log n) + q` with `theta = -1 / log p`. The
//! probability `P{M_n <= floor(theta log n) + q}` then tracks
//! `exp(-p^(q + 1 - c))` with `c = frac(theta log n)`, and because the
//! fractional parts are dense in `[0, 1]` the sequence keeps oscillating.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{check_not_nan, check_open_unit, EvtError, Result};

/// Distance to an integer below which floors of `theta log n` are resolved
/// by an exact power comparison instead of trusting the rounded logarithm.
const FLOOR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricParams {
    p: f64,
    theta: f64,
}

impl GeometricParams {
    pub fn new(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(GeometricParams {
            p,
            theta: -1.0 / p.ln(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `theta = -1 / log p`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `p^k`, the tail mass `P{X >= k}` for integer `k >= 0`.
    pub fn tail_mass(&self, k: i64) -> f64 {
        if k <= 0 {
            return 1.0;
        }
        match i32::try_from(k) {
            Ok(k) => self.p.powi(k),
            Err(_) => (k as f64 * self.p.ln()).exp(),
        }
    }

    /// `F(t) = 1 - p^floor(t + 1)`, zero on the negative axis.
    pub fn cdf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t < 0.0 {
            return 0.0;
        }
        if t.is_infinite() {
            return 1.0;
        }
        1.0 - self.tail_mass((t + 1.0).floor() as i64)
    }

    /// `F^<-(1 - u) = floor(log u / log p)` for a tail mass `u`.
    ///
    /// The rounded logarithm ratio is only a starting point: the result is
    /// moved to the smallest integer `t >= 0` with `p^(t + 1) < u`, decided
    /// by comparing powers directly, so that `u = p^m` lands on `m`.
    pub fn upper_quantile(&self, u: f64) -> Result<i64> {
        check_open_unit("tail mass u", u)?;
        let mut m = (u.ln() / self.p.ln()).floor().max(0.0) as i64;
        while m > 0 && self.tail_mass(m) < u {
            m -= 1;
        }
        while self.tail_mass(m + 1) >= u {
            m += 1;
        }
        Ok(m)
    }

    /// `F^<-(u) = inf { t : F(t) > u }` on the probability axis.
    pub fn quantile(&self, u: f64) -> Result<i64> {
        check_open_unit("u", u)?;
        let mut m = ((-u).ln_1p() / self.p.ln()).floor().max(0.0) as i64;
        while m > 0 && self.cdf((m - 1) as f64) > u {
            m -= 1;
        }
        while self.cdf(m as f64) <= u {
            m += 1;
        }
        Ok(m)
    }

    /// `floor(theta log n)` for `n >= 1`.
    ///
    /// Near an integer `k`, `theta log n >= k` is decided as `n p^k >= 1`,
    /// which is exact whenever `p` is a power of two.
    pub fn floor_theta_log(&self, n: u64) -> i64 {
        let t = self.theta * (n as f64).ln();
        let k = t.round();
        if (t - k).abs() < FLOOR_GUARD {
            let k = k as i64;
            if n as f64 * self.tail_mass(k) >= 1.0 {
                k
            } else {
                k - 1
            }
        } else {
            t.floor() as i64
        }
    }

    /// `frac(theta log n)` consistent with [`Self::floor_theta_log`].
    pub fn frac_theta_log(&self, n: u64) -> f64 {
        let t = self.theta * (n as f64).ln();
        let k = self.floor_theta_log(n);
        if (t - k as f64).abs() < FLOOR_GUARD && n as f64 * self.tail_mass(k) == 1.0 {
            return 0.0;
        }
        (t - k as f64).clamp(0.0, 1.0 - f64::EPSILON / 2.0)
    }

    /// Analytic subsequence limit `exp(-p^(q + 1 - c))` of the probe
    /// probability along `n` with `frac(theta log n) -> c`.
    pub fn cluster_limit(&self, q: i64, c: f64) -> f64 {
        (-self.p.powf(q as f64 + 1.0 - c)).exp()
    }

    /// `P{M_n <= floor(theta log n) + q}` together with the lattice point.
    pub fn probe(&self, n: u64, q: i64) -> ProbePoint {
        let m = self.floor_theta_log(n) + q;
        let probability = if m < 0 {
            0.0
        } else {
            (n as f64 * (-self.tail_mass(m + 1)).ln_1p()).exp()
        };
        ProbePoint { n, m, probability }
    }
}

/// `geom_cdf`.
pub fn geom_cdf(params: &GeometricParams, t: f64) -> f64 {
    params.cdf(t)
}

/// `geom_quantile`: `F^<-(1 - u)` for the tail mass `u`.
pub fn geom_quantile(params: &GeometricParams, u: f64) -> Result<i64> {
    params.upper_quantile(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbePoint {
    pub n: u64,
    pub m: i64,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterPoint {
    pub c: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationReport {
    pub p: f64,
    pub theta: f64,
    pub q: i64,
    pub probe: Vec<ProbePoint>,
    pub lim_inf_est: f64,
    pub lim_sup_est: f64,
    pub cluster_points: Vec<ClusterPoint>,
}

impl OscillationReport {
    pub fn oscillation(&self) -> f64 {
        self.lim_sup_est - self.lim_inf_est
    }
}

/// Probes `P{M_n <= floor(theta log n) + q}` along `n_values`.
///
/// `lim_inf_est` and `lim_sup_est` are taken over the tail half of the grid,
/// where the `O(1/n)` bias of early terms has died out.
pub fn oscillation_scan(
    params: &GeometricParams,
    q: i64,
    n_values: &[u64],
    cluster_cs: &[f64],
) -> Result<OscillationReport> {
    if n_values.is_empty() {
        return Err(EvtError::domain("oscillation scan needs at least one n"));
    }
    if n_values.contains(&0) {
        return Err(EvtError::domain("n must be positive"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvtError::domain("n values must be strictly increasing"));
    }
    for &c in cluster_cs {
        check_not_nan("c", c)?;
        if !(0.0..1.0).contains(&c) {
            return Err(EvtError::domain(format!(
                "cluster point c = {c} must lie in [0, 1)"
            )));
        }
    }
    let probe: Vec<ProbePoint> = n_values.iter().map(|&n| params.probe(n, q)).collect();
    let tail = &probe[probe.len() / 2..];
    let lim_inf_est = tail
        .iter()
        .map(|pt| pt.probability)
        .fold(f64::INFINITY, f64::min);
    let lim_sup_est = tail
        .iter()
        .map(|pt| pt.probability)
        .fold(f64::NEG_INFINITY, f64::max);
    let cluster_points = cluster_cs
        .iter()
        .map(|&c| ClusterPoint {
            c,
            limit: params.cluster_limit(q, c),
        })
        .collect();
    Ok(OscillationReport {
        p: params.p,
        theta: params.theta,
        q,
        probe,
        lim_inf_est,
        lim_sup_est,
        cluster_points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subsequence {
    pub c: f64,
    pub ks: Vec<i64>,
    pub terms: Vec<u64>,
    /// Indices `k` whose rounded term repeated the previous one and were dropped.
    pub collisions: Vec<i64>,
}

/// `n_k = round(e^((k + c) / theta)) = round(p^-(k + c))`.
///
/// Along these terms `frac(theta log n_k) -> c` and the gaps grow like `1/p`.
pub fn subsequence_generator(
    params: &GeometricParams,
    c: f64,
    k_range: RangeInclusive<i64>,
) -> Result<Subsequence> {
    check_not_nan("c", c)?;
    if !(0.0..1.0).contains(&c) {
        return Err(EvtError::domain(format!("c = {c} must lie in [0, 1)")));
    }
    if k_range.is_empty() {
        return Err(EvtError::domain("empty k range"));
    }
    if (*k_range.start() as f64 + c) < 0.0 {
        return Err(EvtError::domain(
            "k + c must be nonnegative so that n_k >= 1",
        ));
    }
    let ratio = 1.0 / params.p;
    let mut out = Subsequence {
        c,
        ks: Vec::new(),
        terms: Vec::new(),
        collisions: Vec::new(),
    };
    for k in k_range {
        let value = ratio.powf(k as f64 + c).round();
        if !value.is_finite() || value >= u64::MAX as f64 {
            return Err(EvtError::domain(format!("n_k overflows at k = {k}")));
        }
        let n = (value as u64).max(1);
        if out.terms.last() == Some(&n) {
            out.collisions.push(k);
            continue;
        }
        out.ks.push(k);
        out.terms.push(n);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracSearch {
    pub n: u64,
    pub frac: f64,
    /// Horizon guaranteed to contain a witness.
    pub sufficient_horizon: u64,
    /// The caller's `n_max` was below `sufficient_horizon`.
    pub horizon_warning: bool,
}

/// Smallest integer `q >= 0` for which `[e^((q+x)/theta), e^((q+y)/theta)]`
/// is longer than one, and the right end of that interval.
///
/// The interval has length `e^((q+x)/theta) (e^((y-x)/theta) - 1)`, which
/// exceeds one as soon as `q > theta log(1 / (e^((y-x)/theta) - 1)) - x`.
pub fn sufficient_horizon(theta: f64, x: f64, y: f64) -> (i64, u64) {
    let growth = ((y - x) / theta).exp_m1();
    let bound = theta * (1.0 / growth).ln() - x;
    let q = if bound < 0.0 {
        0
    } else {
        bound.floor() as i64 + 1
    };
    let right = ((q as f64 + y) / theta).exp().ceil();
    let horizon = if right >= u64::MAX as f64 {
        u64::MAX
    } else {
        right as u64
    };
    (q, horizon.max(1))
}

fn frac_of(theta: f64, n: u64) -> f64 {
    let t = theta * (n as f64).ln();
    t - t.floor()
}

/// Smallest `n <= n_max` with `frac(theta log n)` in `[x, y]`.
///
/// Walks the windows `theta log n in [q + x, q + y]` for `q = 0, 1, ...`,
/// testing the integers at each window's left edge; every hit is confirmed by
/// evaluating the fractional part directly.
pub fn frac_log_search(theta: f64, x: f64, y: f64, n_max: u64) -> Result<FracSearch> {
    check_not_nan("theta", theta)?;
    check_not_nan("x", x)?;
    check_not_nan("y", y)?;
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(EvtError::domain(format!(
            "theta = {theta} must be positive"
        )));
    }
    if !(0.0 <= x && x < y && y <= 1.0) {
        return Err(EvtError::domain(format!(
            "need 0 <= x < y <= 1, got [{x}, {y}]"
        )));
    }
    if n_max == 0 {
        return Err(EvtError::domain("n_max must be at least 1"));
    }
    let (_, horizon) = sufficient_horizon(theta, x, y);
    let hit = |n: u64| {
        let f = frac_of(theta, n);
        (x..=y).contains(&f)
    };
    let mut best: Option<u64> = None;
    for q in 0i64.. {
        let left = ((q as f64 + x) / theta).exp().ceil();
        if left > n_max as f64 + 1.0 {
            break;
        }
        let left = left as u64;
        if best.is_some_and(|b| left.saturating_sub(1) > b) {
            break;
        }
        for n in left.saturating_sub(1).max(1)..=left.saturating_add(1).min(n_max) {
            if hit(n) {
                best = Some(best.map_or(n, |b| b.min(n)));
                break;
            }
        }
    }
    match best {
        Some(n) => Ok(FracSearch {
            n,
            frac: frac_of(theta, n),
            sufficient_horizon: horizon,
            horizon_warning: n_max < horizon,
        }),
        None => Err(EvtError::NotFound {
            n_max,
            sufficient_horizon: horizon,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> GeometricParams {
        GeometricParams::new(0.5).unwrap()
    }

    #[test]
    fn theta_identity() {
        for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
            let g = GeometricParams::new(p).unwrap();
            assert!((g.theta() * (1.0 / p).ln() - 1.0).abs() < 1e-12);
        }
        assert!(GeometricParams::new(1.0).is_err());
        assert!(GeometricParams::new(0.0).is_err());
    }

    #[test]
    fn cdf_values() {
        let g = half();
        assert_eq!(geom_cdf(&g, 0.0), 0.5);
        assert_eq!(geom_cdf(&g, -0.5), 0.0);
        assert_eq!(geom_cdf(&g, 2.9), 0.875);
    }

    #[test]
    fn upper_quantile_values() {
        let g = half();
        assert_eq!(geom_quantile(&g, 0.125).unwrap(), 3);
        assert_eq!(geom_quantile(&g, 1.0 / 7.0).unwrap(), 2);
        assert_eq!(geom_quantile(&g, 0.9).unwrap(), 0);
        assert!(geom_quantile(&g, 1.0).is_err());
        assert!(geom_quantile(&g, 0.0).is_err());
    }

    #[test]
    fn upper_quantile_matches_brute_force() {
        // smallest t with p^floor(t+1) < u, scanning the integer support
        for p in [0.2, 0.5, 0.75] {
            let g = GeometricParams::new(p).unwrap();
            for i in 1..200 {
                let u = i as f64 / 200.0;
                let brute = (0..).find(|&t: &i64| g.tail_mass(t + 1) < u).unwrap();
                assert_eq!(g.upper_quantile(u).unwrap(), brute, "p={p} u={u}");
            }
        }
    }

    #[test]
    fn floor_is_exact_on_powers() {
        let g = half();
        for k in 0..62 {
            let n = 1u64 << k;
            assert_eq!(g.floor_theta_log(n), k as i64);
            assert_eq!(g.frac_theta_log(n), 0.0);
            // n - 1 is only representable as f64 below 2^53
            if k > 1 && k <= 53 {
                assert_eq!(g.floor_theta_log(n - 1), k as i64 - 1);
            }
        }
    }

    #[test]
    fn frac_search_examples() {
        assert_eq!(frac_log_search(1.0, 0.0, 1.0, 10).unwrap().n, 1);
        assert_eq!(frac_log_search(1.0 / 2f64.ln(), 0.4, 0.6, 10).unwrap().n, 3);
        assert_eq!(frac_log_search(1.0, 0.6, 0.7, 10).unwrap().n, 2);
    }

    #[test]
    fn frac_search_matches_linear_scan() {
        for &(theta, x, y) in &[
            (0.3, 0.1, 0.2),
            (2.5, 0.9, 0.97),
            (4.0, 0.5, 0.56),
            (0.7, 0.0, 0.05),
        ] {
            let scan = (1..)
                .find(|&n| (x..=y).contains(&frac_of(theta, n)))
                .unwrap();
            assert_eq!(frac_log_search(theta, x, y, 10_000_000).unwrap().n, scan);
        }
    }

    #[test]
    fn frac_search_reports_horizon() {
        let err = frac_log_search(5.0, 0.5, 0.51, 1).unwrap_err();
        match err {
            EvtError::NotFound {
                sufficient_horizon, ..
            } => assert!(sufficient_horizon > 1),
            other => panic!("{other:?}"),
        }
        let ok = frac_log_search(1.0, 0.6, 0.7, 2).unwrap();
        assert!(ok.horizon_warning == (2 < ok.sufficient_horizon));
        assert!(frac_log_search(1.0, 0.7, 0.6, 10).is_err());
    }

    #[test]
    fn probe_lies_between_cluster_limits() {
        let g = half();
        let n: Vec<u64> = (0..64)
            .map(|i| (1e3 * 1000f64.powf(i as f64 / 63.0)) as u64)
            .collect();
        let rep = oscillation_scan(&g, 0, &n, &[0.0, 0.5]).unwrap();
        for pt in &rep.probe {
            assert!(
                pt.probability > (-1f64).exp() - 1e-3 && pt.probability < (-0.5f64).exp() + 1e-3
            );
        }
        assert!(rep.oscillation() >= 0.2);
        assert!((rep.cluster_points[0].limit - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn large_offset_saturates() {
        let g = half();
        let n: Vec<u64> = (0..16)
            .map(|i| (1e3 * 1000f64.powf(i as f64 / 15.0)) as u64)
            .collect();
        let rep = oscillation_scan(&g, 10, &n, &[]).unwrap();
        assert!(rep.probe.iter().all(|pt| pt.probability >= 0.999));
    }

    #[test]
    fn negative_lattice_point_has_zero_probability() {
        let rep = oscillation_scan(&half(), -5, &[1, 2], &[]).unwrap();
        assert!(rep.probe.iter().all(|pt| pt.m < 0 && pt.probability == 0.0));
    }

    #[test]
    fn powers_of_two_subsequence() {
        let s = subsequence_generator(&half(), 0.0, 0..=40).unwrap();
        for (k, n) in s.ks.iter().zip(&s.terms) {
            assert_eq!(*n, 1u64 << k);
        }
        let ratio = s.terms[31] as f64 / s.terms[30] as f64;
        assert!((ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn collisions_are_dropped() {
        let g = GeometricParams::new(0.9).unwrap();
        let s = subsequence_generator(&g, 0.0, 0..=10).unwrap();
        assert!(!s.collisions.is_empty());
        assert!(s.terms.windows(2).all(|w| w[0] < w[1]));
    }
}
