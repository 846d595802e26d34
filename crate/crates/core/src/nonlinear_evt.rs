//! Nonlinear normalizations.
//!
//! For a uniform base, `g_n(x) = G^<-(e^{-n(1-x)})` sends the maximum `M_n`
//! to a variable whose law tends to any prescribed target `G`; composing
//! with the base cdf extends the construction to continuous bases. The
//! diagnostics here check, on finite grids, that the normalized quantile
//! functions `h_n` settle down and that their limit is not constant.

use crate::dist::Distribution;
use crate::error::{check_not_nan, EvtError, Result};
use crate::linear_evt::norming_constants;
use crate::maxima::{check_monotone, h_n_eval, HnVariant, Monotonicity, NormalizingSequence};
use crate::report::{CauchyCriterion, ConvergenceReport, GridPoint};

/// `g_n(x) = G^<-(exp(-n (1 - F(x))))` with target `G` and base `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileNormalizer {
    target: Distribution,
    base: Distribution,
}

impl QuantileNormalizer {
    pub fn new(target: Distribution, base: Distribution) -> Result<Self> {
        if !base.is_continuous() {
            return Err(EvtError::UnsupportedBase(format!(
                "{base} is discrete; its maxima admit no monotone normalization with a nondegenerate limit"
            )));
        }
        Ok(QuantileNormalizer { target, base })
    }

    /// The construction on the standard uniform base.
    pub fn uniform_base(target: Distribution) -> Self {
        QuantileNormalizer {
            target,
            base: Distribution::standard_uniform(),
        }
    }

    pub fn target(&self) -> &Distribution {
        &self.target
    }

    pub fn base(&self) -> &Distribution {
        &self.base
    }

    /// `G^<-(e^{-n s})` for a base tail mass `s = 1 - F(x)`.
    fn quantile_from_tail(&self, n: u64, s: f64) -> Result<f64> {
        let level = (-(n as f64) * s).exp();
        if level <= 0.0 {
            // e^{-n s} underflows: G^<-(0+) is the lower end of the target support
            return Ok(self.target.support().lower);
        }
        if level >= 1.0 {
            return Err(EvtError::domain(format!(
                "g_n: e^(-n(1 - F(x))) = 1 at n = {n}; x must lie below the upper end of the base support"
            )));
        }
        self.target.quantile(level)
    }
}

impl NormalizingSequence for QuantileNormalizer {
    fn apply(&self, n: u64, x: f64) -> Result<f64> {
        check_not_nan("x", x)?;
        let s = self.base.survival(x);
        if s <= 0.0 {
            return Err(EvtError::domain(format!(
                "g_n needs x below the upper end of the base support, got x = {x}"
            )));
        }
        self.quantile_from_tail(n, s)
    }

    fn monotonicity(&self) -> Option<Monotonicity> {
        Some(Monotonicity::Nondecreasing)
    }

    /// For a continuous base `1 - F(F^<-(1 - s)) = s`, so `g_n` at the upper
    /// quantile reduces to `G^<-(e^{-n s})` with no rounding of `1 - s`.
    fn apply_upper_quantile(&self, n: u64, base: &Distribution, tail: f64) -> Result<f64> {
        if *base == self.base {
            crate::error::check_open_unit("tail mass", tail)?;
            return self.quantile_from_tail(n, tail);
        }
        self.apply(n, base.upper_quantile(tail)?)
    }
}

/// Affine maps `g_n(x) = (x - b_n) / a_n` with the norming constants of `base`.
///
/// With `a_n < 0` these maps are nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineNormalizer {
    base: Distribution,
}

impl AffineNormalizer {
    pub fn new(base: Distribution) -> Self {
        AffineNormalizer { base }
    }
}

impl NormalizingSequence for AffineNormalizer {
    fn apply(&self, n: u64, x: f64) -> Result<f64> {
        Ok(norming_constants(&self.base, n)?.normalize(x))
    }

    fn monotonicity(&self) -> Option<Monotonicity> {
        Some(Monotonicity::Nonincreasing)
    }

    fn apply_upper_quantile(&self, n: u64, base: &Distribution, tail: f64) -> Result<f64> {
        if *base != self.base {
            return self.apply(n, base.upper_quantile(tail)?);
        }
        let c = norming_constants(&self.base, n)?;
        Ok(self.base.upper_quantile_spread(tail, 1.0 / n as f64)? / c.a_n)
    }
}

/// `x -> G^<-(e^{-n(1-x)})` on the uniform base.
pub fn build_g_n(target: &Distribution, n: u64) -> Result<impl Fn(f64) -> Result<f64>> {
    build_g_n_general(target, &Distribution::standard_uniform(), n)
}

/// `x -> G^<-(e^{-n(1-F(x))})` for a continuous base `F`.
pub fn build_g_n_general(
    target: &Distribution,
    base: &Distribution,
    n: u64,
) -> Result<impl Fn(f64) -> Result<f64>> {
    if n == 0 {
        return Err(EvtError::domain("n must be at least 1"));
    }
    let normalizer = QuantileNormalizer::new(target.clone(), base.clone())?;
    Ok(move |x: f64| normalizer.apply(n, x))
}

/// True when the tabulated values vary by more than `tol`.
pub fn nondegeneracy_check(values: &[(f64, f64)], tol: f64) -> Result<bool> {
    check_not_nan("tol", tol)?;
    let mut xs: Vec<f64> = values.iter().map(|&(x, _)| x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 2 {
        return Err(EvtError::domain(
            "nondegeneracy needs at least two distinct abscissae",
        ));
    }
    let finite: Vec<f64> = values
        .iter()
        .map(|&(_, h)| h)
        .filter(|h| !h.is_nan())
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo > tol)
}

/// 32 geometrically spaced points on `[1/16, 16]`.
pub fn default_x_grid() -> Vec<f64> {
    let (a, b) = ((1.0f64 / 16.0).ln(), 16f64.ln());
    (0..32)
        .map(|i| (a + (b - a) * i as f64 / 31.0).exp())
        .collect()
}

/// Tabulates `h_n(x)` over `x_grid` x `n_grid`, applies the Cauchy criterion
/// per abscissa, and checks that the limit table (values at the largest `n`)
/// is nonconstant.
pub fn convergence_diagnostic(
    g: &dyn NormalizingSequence,
    base: &Distribution,
    x_grid: &[f64],
    n_grid: &[u64],
    variant: HnVariant,
    criterion: CauchyCriterion,
) -> Result<ConvergenceReport> {
    if x_grid.is_empty() || n_grid.is_empty() {
        return Err(EvtError::domain("x and n grids must be nonempty"));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvtError::domain("n grid must be strictly increasing"));
    }
    for &n in n_grid {
        check_monotone(g, n, base)?;
    }
    let mut values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let row = n_grid
            .iter()
            .map(|&n| h_n_eval(g, base, n, x, variant))
            .collect::<Result<Vec<f64>>>()?;
        values.push(row);
    }
    let report = ConvergenceReport::assemble(
        "n",
        n_grid.iter().map(|&n| n as f64).collect(),
        x_grid.iter().map(|&x| GridPoint::Abscissa { x }).collect(),
        values,
        criterion,
    );
    let table: Vec<(f64, f64)> = x_grid
        .iter()
        .copied()
        .zip(report.limit_table.iter().copied())
        .collect();
    let nondegenerate = if table.len() >= 2 {
        nondegeneracy_check(&table, criterion.tol)?
    } else {
        false
    };
    Ok(report.with_nondegeneracy(nondegenerate))
}
