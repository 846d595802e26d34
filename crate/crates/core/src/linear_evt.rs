//! Affine normalizations: the de Haan ratio criterion, the `k_rho` family,
//! tail-index estimation from the quantile scale function, the norming
//! constants `a_n, b_n` and the limit law of `k_rho(omega) / k_rho(2)`.

use serde::Serialize;

use crate::dist::Distribution;
use crate::error::{check_not_nan, EvtError, Result};
use crate::report::{CauchyCriterion, ConvergenceReport, GridPoint};
use crate::stats::RandomStream;

/// Below this `|rho|`, `k_rho` switches from the closed form to its series.
pub const RHO_SWITCH: f64 = 1e-6;

/// Default classification tolerance for estimated tail indices.
pub const CLASSIFY_TOL: f64 = 1e-2;

/// Default `(u, v)` values for the ratio grid.
///
/// Includes 3 next to the powers of two: on a lattice of powers of two the
/// geometric law with `p = 1/2` shifts its quantile by whole steps and its
/// ratios look spuriously constant.
pub const DEFAULT_UV_VALUES: [f64; 5] = [0.25, 0.5, 2.0, 3.0, 4.0];

/// `k_rho(u) = (u^rho - 1) / rho`, and `log u` at `rho = 0`.
pub fn k_rho(rho: f64, u: f64) -> Result<f64> {
    check_not_nan("rho", rho)?;
    check_not_nan("u", u)?;
    if u <= 0.0 {
        return Err(EvtError::domain(format!("k_rho needs u > 0, got {u}")));
    }
    let l = u.ln();
    if rho.abs() > RHO_SWITCH || (rho * l).abs() > 1e-3 {
        Ok((rho * l).exp_m1() / rho)
    } else {
        // (e^{rho l} - 1) / rho = l (1 + rho l / 2 + (rho l)^2 / 6 + ...)
        let z = rho * l;
        Ok(l * (1.0 + z / 2.0 + z * z / 6.0))
    }
}

/// Inverse of `u -> k_rho(u)`: `(1 + rho y)^(1/rho)`, or `e^y` at `rho = 0`.
///
/// Returns `None` when `1 + rho y <= 0`, i.e. `y` lies outside the range of
/// `k_rho`.
pub fn k_rho_inverse(rho: f64, y: f64) -> Option<f64> {
    if rho == 0.0 {
        return Some(y.exp());
    }
    let z = rho * y;
    if 1.0 + z <= 0.0 {
        return None;
    }
    if rho.abs() > RHO_SWITCH || z.abs() > 1e-3 {
        Some((z.ln_1p() / rho).exp())
    } else {
        Some((y * (1.0 - z / 2.0 + z * z / 3.0)).exp())
    }
}

/// `G_rho(x) = P{ k_rho(omega) / k_rho(2) <= x }` for standard exponential
/// `omega`.
pub fn limit_cdf(rho: f64, x: f64) -> f64 {
    if rho.is_nan() || x.is_nan() {
        return f64::NAN;
    }
    let scale = k_rho(rho, 2.0).expect("k_rho(., 2) is total");
    match k_rho_inverse(rho, x * scale) {
        Some(t) => -(-t).exp_m1(),
        None if rho > 0.0 => 0.0,
        None => 1.0,
    }
}

/// `[F^<-(1 - eps u) - F^<-(1 - eps)] / [F^<-(1 - eps v) - F^<-(1 - eps)]`.
pub fn dehaan_ratio(dist: &Distribution, u: f64, v: f64, eps: f64) -> Result<f64> {
    for (name, val) in [("u", u), ("v", v), ("eps", eps)] {
        check_not_nan(name, val)?;
        if val <= 0.0 {
            return Err(EvtError::domain(format!("{name} = {val} must be positive")));
        }
    }
    if v == 1.0 {
        return Err(EvtError::domain(
            "v = 1 makes the denominator vanish identically",
        ));
    }
    if eps * u >= 1.0 || eps * v >= 1.0 || eps >= 1.0 {
        return Err(EvtError::domain(format!(
            "need eps u < 1 and eps v < 1, got eps = {eps}, u = {u}, v = {v}"
        )));
    }
    let num = dist.upper_quantile_spread(eps * u, eps)?;
    let den = dist.upper_quantile_spread(eps * v, eps)?;
    if den == 0.0 {
        return Err(EvtError::DegenerateTail { u, v, eps });
    }
    Ok(num / den)
}

/// All ordered pairs `(u, v)` with `u != v` and `v != 1` from `values`.
pub fn uv_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &u in values {
        for &v in values {
            if u != v && v != 1.0 {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn default_uv_pairs() -> Vec<(f64, f64)> {
    uv_pairs(&DEFAULT_UV_VALUES)
}

fn check_decreasing_grid(eps_grid: &[f64], min_len: usize) -> Result<()> {
    if eps_grid.len() < min_len {
        return Err(EvtError::domain(format!(
            "eps grid needs at least {min_len} points, got {}",
            eps_grid.len()
        )));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(EvtError::domain("eps grid values must lie in (0, 1)"));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(EvtError::domain("eps grid must be strictly decreasing"));
    }
    Ok(())
}

/// Evaluates the de Haan ratio across a shrinking `eps` grid for every
/// `(u, v)` pair and applies the Cauchy criterion to each row.
pub fn dehaan_test(
    dist: &Distribution,
    eps_grid: &[f64],
    uv_grid: &[(f64, f64)],
    criterion: CauchyCriterion,
) -> Result<ConvergenceReport> {
    check_decreasing_grid(eps_grid, 4)?;
    if uv_grid.is_empty() {
        return Err(EvtError::domain("empty (u, v) grid"));
    }
    let mut points = Vec::with_capacity(uv_grid.len());
    let mut values = Vec::with_capacity(uv_grid.len());
    for &(u, v) in uv_grid {
        let row = eps_grid
            .iter()
            .map(|&eps| dehaan_ratio(dist, u, v, eps))
            .collect::<Result<Vec<f64>>>()?;
        points.push(GridPoint::Pair { u, v });
        values.push(row);
    }
    Ok(ConvergenceReport::assemble(
        "eps",
        eps_grid.to_vec(),
        points,
        values,
        criterion,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleEstimate {
    pub eps: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoEstimate {
    /// Estimate at the smallest `eps`.
    pub rho: f64,
    pub w: f64,
    pub per_scale: Vec<ScaleEstimate>,
    /// Range of the estimates over the trailing half of the grid.
    pub spread: f64,
}

/// Regular-variation estimate of the tail index.
///
/// With the scale function `r(eps) = F^<-(1 - eps) - F^<-(1 - 2 eps)`, each
/// grid point yields `log(r(eps w) / r(eps)) / log w`, which settles on
/// `rho` because `r(eps w) / r(eps) -> w^rho`.
pub fn estimate_rho(dist: &Distribution, eps_grid: &[f64], w: f64) -> Result<RhoEstimate> {
    check_not_nan("w", w)?;
    if w <= 1.0 || w.is_infinite() {
        return Err(EvtError::domain(format!("w = {w} must exceed 1")));
    }
    check_decreasing_grid(eps_grid, 1)?;
    if eps_grid.iter().any(|&e| 2.0 * e * w >= 1.0) {
        return Err(EvtError::domain("every grid point needs 2 eps w < 1"));
    }
    let scale_fn = |eps: f64| -> Result<f64> {
        let r = dist.upper_quantile_spread(eps, 2.0 * eps)?;
        if r == 0.0 {
            return Err(EvtError::DegenerateTail {
                u: 1.0,
                v: 2.0,
                eps,
            });
        }
        Ok(r)
    };
    let mut sign = 0.0;
    let mut per_scale = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let r = scale_fn(eps)?;
        let rw = scale_fn(eps * w)?;
        for val in [r, rw] {
            if sign == 0.0 {
                sign = val.signum();
            } else if val.signum() != sign {
                return Err(EvtError::InconsistentTail { eps });
            }
        }
        per_scale.push(ScaleEstimate {
            eps,
            estimate: (rw / r).ln() / w.ln(),
        });
    }
    let tail = &per_scale[per_scale.len() / 2..];
    let lo = tail
        .iter()
        .map(|s| s.estimate)
        .fold(f64::INFINITY, f64::min);
    let hi = tail
        .iter()
        .map(|s| s.estimate)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RhoEstimate {
        rho: per_scale.last().map(|s| s.estimate).unwrap_or(f64::NAN),
        w,
        per_scale,
        spread: hi - lo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormingConstants {
    pub n: u64,
    /// `F^<-(1 - 2/n) - F^<-(1 - 1/n)`, never positive.
    pub a_n: f64,
    /// `F^<-(1 - 1/n)`.
    pub b_n: f64,
}

impl NormingConstants {
    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.b_n) / self.a_n
    }
}

pub fn norming_constants(dist: &Distribution, n: u64) -> Result<NormingConstants> {
    if n < 3 {
        return Err(EvtError::domain(format!(
            "norming constants need n >= 3, got {n}"
        )));
    }
    let s1 = 1.0 / n as f64;
    let b_n = dist.upper_quantile(s1)?;
    let a_n = dist.upper_quantile_spread(2.0 * s1, s1)?;
    if a_n == 0.0 {
        return Err(EvtError::DegenerateNormalization { n });
    }
    Ok(NormingConstants { n, a_n, b_n })
}

/// `(M_n - b_n) / a_n` for `reps` maxima drawn through the exponential
/// representation.
///
/// The difference `M_n - b_n` is formed as a quantile spread, which keeps
/// full precision for laws with a bounded upper end.
pub fn normalized_maxima(
    dist: &Distribution,
    n: u64,
    reps: usize,
    stream: &mut RandomStream,
) -> Result<(NormingConstants, Vec<f64>)> {
    let constants = norming_constants(dist, n)?;
    if reps == 0 {
        return Err(EvtError::domain("reps must be at least 1"));
    }
    let s1 = 1.0 / n as f64;
    let mut out = Vec::with_capacity(reps);
    while out.len() < reps {
        let omega = stream.standard_exponential();
        let tail = -(-omega / n as f64).exp_m1();
        if !(tail > 0.0 && tail < 1.0) {
            continue;
        }
        out.push(dist.upper_quantile_spread(tail, s1)? / constants.a_n);
    }
    Ok((constants, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvtType {
    Frechet,
    Gumbel,
    Weibull,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeClass {
    pub family: EvtType,
    pub rho: f64,
}

/// Frechet for `rho < -tol`, Gumbel for `|rho| <= tol`, Weibull for `rho > tol`.
pub fn classify_type(rho: f64, tol: f64) -> Result<TypeClass> {
    check_not_nan("rho", rho)?;
    check_not_nan("tol", tol)?;
    if tol < 0.0 {
        return Err(EvtError::domain(format!(
            "tolerance {tol} must be nonnegative"
        )));
    }
    let family = if rho < -tol {
        EvtType::Frechet
    } else if rho > tol {
        EvtType::Weibull
    } else {
        EvtType::Gumbel
    };
    Ok(TypeClass { family, rho })
}
