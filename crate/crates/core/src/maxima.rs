//! Laws of the maximum `M_n` of `n` independent draws, two samplers for it,
//! and the normalized quantile functions `h_n` in their three forms.

use serde::Serialize;

use crate::dist::{checked_cdf, Distribution};
use crate::error::{check_not_nan, EvtError, Result};
use crate::stats::RandomStream;

/// Law of `M_n = max(X_1, ..., X_n)` with `X_i ~ base`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxLaw {
    base: Distribution,
    n: u64,
}

impl MaxLaw {
    pub fn new(base: Distribution, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(EvtError::domain("sample size n must be at least 1"));
        }
        Ok(MaxLaw { base, n })
    }

    pub fn base(&self) -> &Distribution {
        &self.base
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `P{M_n <= x} = F(x)^n`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let f = checked_cdf(&self.base, x)?;
        if let Distribution::Geometric(g) = &self.base {
            // exp(n log1p(-p^k)) keeps full relative accuracy when F(x) ~ 1 - 1/n
            if x >= 0.0 && x.is_finite() {
                let tail = g.tail_mass((x + 1.0).floor() as i64);
                return Ok((self.n as f64 * (-tail).ln_1p()).exp());
            }
        }
        Ok(match i32::try_from(self.n) {
            Ok(n) => f.powi(n),
            Err(_) => f.powf(self.n as f64),
        })
    }

    /// Maximum of `n` quantile-transform draws.
    pub fn sample_direct(&self, stream: &mut RandomStream) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for _ in 0..self.n {
            best = best.max(self.base.draw(stream)?);
        }
        Ok(best)
    }

    /// `F^<-(e^{-omega/n})` for a given exponential variate `omega > 0`.
    pub fn from_exponential(&self, omega: f64) -> Result<f64> {
        check_not_nan("omega", omega)?;
        if omega <= 0.0 || omega.is_infinite() {
            return Err(EvtError::domain(format!(
                "omega = {omega} must be positive and finite"
            )));
        }
        let tail = -(-omega / self.n as f64).exp_m1();
        if tail <= 0.0 || tail >= 1.0 {
            return Err(EvtError::domain(format!(
                "e^(-omega/n) rounds to an endpoint for omega = {omega}, n = {}",
                self.n
            )));
        }
        self.base.upper_quantile(tail)
    }

    /// One draw of `M_n` through its exponential representation
    /// `F^<-(e^{-omega/n})`, `omega` standard exponential.
    pub fn sample_exponential_rep(&self, stream: &mut RandomStream) -> Result<f64> {
        loop {
            let omega = stream.standard_exponential();
            let tail = -(-omega / self.n as f64).exp_m1();
            // tail == 0 has probability zero but can occur in floating point
            if tail > 0.0 && tail < 1.0 {
                return self.base.upper_quantile(tail);
            }
        }
    }

    pub fn sample(
        &self,
        stream: &mut RandomStream,
        method: MaxSampler,
        count: usize,
    ) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(EvtError::domain("sample count must be at least 1"));
        }
        (0..count)
            .map(|_| match method {
                MaxSampler::Direct => self.sample_direct(stream),
                MaxSampler::ExponentialRep => self.sample_exponential_rep(stream),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxSampler {
    Direct,
    ExponentialRep,
}

pub fn max_cdf(law: &MaxLaw, x: f64) -> Result<f64> {
    law.cdf(x)
}

pub fn sample_max_direct(law: &MaxLaw, stream: &mut RandomStream) -> Result<f64> {
    law.sample_direct(stream)
}

pub fn sample_max_exponential_rep(law: &MaxLaw, stream: &mut RandomStream) -> Result<f64> {
    law.sample_exponential_rep(stream)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

/// A sequence of monotone maps `n -> g_n`.
pub trait NormalizingSequence: Send + Sync {
    /// `g_n(x)`.
    fn apply(&self, n: u64, x: f64) -> Result<f64>;

    /// Declared direction of every `g_n`, if known.
    fn monotonicity(&self) -> Option<Monotonicity> {
        None
    }

    /// `g_n(F^<-(1 - tail))`.
    ///
    /// Sequences that know how `g_n` composes with the base quantile can
    /// override this to avoid rounding `1 - tail` near one.
    fn apply_upper_quantile(&self, n: u64, base: &Distribution, tail: f64) -> Result<f64> {
        self.apply(n, base.upper_quantile(tail)?)
    }
}

/// Wraps a closure `(n, x) -> g_n(x)`.
pub struct FnSequence<F> {
    f: F,
    monotonicity: Option<Monotonicity>,
}

impl<F> FnSequence<F>
where
    F: Fn(u64, f64) -> f64 + Send + Sync,
{
    pub fn new(f: F, monotonicity: Option<Monotonicity>) -> Self {
        FnSequence { f, monotonicity }
    }

    pub fn nondecreasing(f: F) -> Self {
        Self::new(f, Some(Monotonicity::Nondecreasing))
    }
}

impl<F> NormalizingSequence for FnSequence<F>
where
    F: Fn(u64, f64) -> f64 + Send + Sync,
{
    fn apply(&self, n: u64, x: f64) -> Result<f64> {
        Ok((self.f)(n, x))
    }

    fn monotonicity(&self) -> Option<Monotonicity> {
        self.monotonicity
    }
}

/// Which parametrization of the normalized quantile function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HnVariant {
    /// `g_n(F^<-(e^{-x/n}))`.
    ExpForm,
    /// `g_n(F^<-(1 - x/n))`.
    LinearForm,
    /// `g_{floor(1/eps)}(F^<-(1 - eps x))` with `eps = 1/n`.
    EpsilonForm,
}

impl HnVariant {
    pub fn name(self) -> &'static str {
        match self {
            HnVariant::ExpForm => "exp_form",
            HnVariant::LinearForm => "linear_form",
            HnVariant::EpsilonForm => "epsilon_form",
        }
    }
}

/// Evaluates `h_n(x)` in the requested form.
pub fn h_n_eval(
    g: &dyn NormalizingSequence,
    base: &Distribution,
    n: u64,
    x: f64,
    variant: HnVariant,
) -> Result<f64> {
    check_not_nan("x", x)?;
    if n == 0 {
        return Err(EvtError::domain("n must be at least 1"));
    }
    if x <= 0.0 || x.is_infinite() {
        return Err(EvtError::domain(format!(
            "{}: x = {x} must be positive and finite",
            variant.name()
        )));
    }
    let tail = match variant {
        HnVariant::ExpForm => -(-x / n as f64).exp_m1(),
        HnVariant::LinearForm | HnVariant::EpsilonForm => {
            if x >= n as f64 {
                return Err(EvtError::domain(format!(
                    "{}: quantile argument 1 - x/n leaves (0, 1) for x = {x}, n = {n}",
                    variant.name()
                )));
            }
            x / n as f64
        }
    };
    if !(tail > 0.0 && tail < 1.0) {
        return Err(EvtError::domain(format!(
            "{}: quantile argument leaves (0, 1) for x = {x}, n = {n}",
            variant.name()
        )));
    }
    g.apply_upper_quantile(n, base, tail)
}

/// `floor(1/eps)` with the sandwich `1/(m+1) < eps <= 1/m` enforced.
///
/// The reciprocal is nudged up by one ulp before flooring so that `eps = 1/m`
/// rounded slightly high still yields `m`.
pub fn floor_reciprocal(eps: f64) -> Result<u64> {
    check_not_nan("eps", eps)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(EvtError::domain(format!("eps = {eps} must lie in (0, 1]")));
    }
    let r = (1.0 / eps).next_up().floor();
    if r >= u64::MAX as f64 {
        return Err(EvtError::domain(format!("1/eps overflows for eps = {eps}")));
    }
    let mut m = (r as u64).max(1);
    while m > 1 && eps * m as f64 > 1.0 {
        m -= 1;
    }
    while eps * (m + 1) as f64 <= 1.0 {
        m += 1;
    }
    Ok(m)
}

/// `g_{floor(1/eps)}(F^<-(1 - eps x))` for a free `eps`.
pub fn h_eps_eval(
    g: &dyn NormalizingSequence,
    base: &Distribution,
    eps: f64,
    x: f64,
) -> Result<f64> {
    check_not_nan("x", x)?;
    let m = floor_reciprocal(eps)?;
    let tail = eps * x;
    if !(x > 0.0 && tail < 1.0) {
        return Err(EvtError::domain(format!(
            "epsilon_form: quantile argument 1 - eps x leaves (0, 1) for eps = {eps}, x = {x}"
        )));
    }
    g.apply_upper_quantile(m, base, tail)
}

/// Spot-checks the monotonicity of `g_n` on 100 random pairs drawn from the
/// base law.
///
/// A declared direction is enforced; without one the pairs only need to
/// agree with each other.
pub fn check_monotone(
    g: &dyn NormalizingSequence,
    n: u64,
    base: &Distribution,
) -> Result<Option<Monotonicity>> {
    let mut stream = RandomStream::substream(0x6d6f_6e6f, n);
    let mut seen_up = false;
    let mut seen_down = false;
    for _ in 0..100 {
        let a = base.draw(&mut stream)?;
        let b = base.draw(&mut stream)?;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (glo, ghi) = match (g.apply(n, lo), g.apply(n, hi)) {
            (Ok(l), Ok(h)) => (l, h),
            // points outside the domain of g_n are not evidence either way
            _ => continue,
        };
        if ghi > glo {
            seen_up = true;
        } else if ghi < glo {
            seen_down = true;
        }
    }
    let violation = match g.monotonicity() {
        Some(Monotonicity::Nondecreasing) => seen_down,
        Some(Monotonicity::Nonincreasing) => seen_up,
        None => seen_up && seen_down,
    };
    if violation {
        return Err(EvtError::Contract(format!(
            "g_n is not monotone at n = {n}"
        )));
    }
    Ok(g.monotonicity().or(match (seen_up, seen_down) {
        (true, false) => Some(Monotonicity::Nondecreasing),
        (false, true) => Some(Monotonicity::Nonincreasing),
        _ => None,
    }))
}
