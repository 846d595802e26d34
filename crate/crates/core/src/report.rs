//! Grid-indexed convergence reports shared by the linear and nonlinear
//! diagnostics.

use serde::Serialize;

use crate::error::{EvtError, Result};

/// Cauchy-style convergence test: the last `window` values along the scale
/// grid must lie within `tol` of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyCriterion {
    pub tol: f64,
    pub window: usize,
}

impl Default for CauchyCriterion {
    fn default() -> Self {
        CauchyCriterion {
            tol: 1e-3,
            window: 3,
        }
    }
}

impl CauchyCriterion {
    pub fn new(tol: f64, window: usize) -> Result<Self> {
        if tol.is_nan() || tol < 0.0 || tol.is_infinite() {
            return Err(EvtError::domain(format!(
                "tolerance {tol} must be finite and nonnegative"
            )));
        }
        if window < 2 {
            return Err(EvtError::domain("Cauchy window needs at least two points"));
        }
        Ok(CauchyCriterion { tol, window })
    }

    /// True when the trailing window is finite and has range at most `tol`.
    pub fn holds(&self, values: &[f64]) -> bool {
        if values.len() < self.window {
            return false;
        }
        let tail = &values[values.len() - self.window..];
        if tail.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= self.tol
    }
}

/// Where in the argument space a row of values was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GridPoint {
    /// A `(u, v)` pair of the de Haan ratio.
    Pair { u: f64, v: f64 },
    /// An abscissa `x` of a normalized quantile function.
    Abscissa { x: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// `"eps"` for shrinking tail masses, `"n"` for growing sample sizes.
    pub scale_name: String,
    /// The scale grid, in evaluation order.
    pub grid: Vec<f64>,
    pub points: Vec<GridPoint>,
    /// `values[i][j]` is the value at `points[i]` and `grid[j]`.
    pub values: Vec<Vec<f64>>,
    pub point_converged: Vec<bool>,
    /// Limit estimate per point: the value at the last scale.
    pub limit_table: Vec<f64>,
    pub criterion: CauchyCriterion,
    pub converged: bool,
    /// Set by diagnostics that also require a nonconstant limit.
    pub nondegenerate: Option<bool>,
    /// Overall outcome: converged, and nondegenerate where that is checked.
    pub verdict: bool,
}

impl ConvergenceReport {
    pub(crate) fn assemble(
        scale_name: &str,
        grid: Vec<f64>,
        points: Vec<GridPoint>,
        values: Vec<Vec<f64>>,
        criterion: CauchyCriterion,
    ) -> Self {
        let point_converged: Vec<bool> = values.iter().map(|row| criterion.holds(row)).collect();
        let limit_table = values
            .iter()
            .map(|row| row.last().copied().unwrap_or(f64::NAN))
            .collect();
        let converged = !point_converged.is_empty() && point_converged.iter().all(|&c| c);
        ConvergenceReport {
            scale_name: scale_name.to_string(),
            grid,
            points,
            values,
            point_converged,
            limit_table,
            criterion,
            converged,
            nondegenerate: None,
            verdict: converged,
        }
    }

    pub(crate) fn with_nondegeneracy(mut self, nondegenerate: bool) -> Self {
        self.nondegenerate = Some(nondegenerate);
        self.verdict = self.converged && nondegenerate;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_window() {
        let c = CauchyCriterion::default();
        assert!(c.holds(&[5.0, 1.0, 1.0005, 1.0]));
        assert!(!c.holds(&[1.0, 2.0, 1.0]));
        assert!(!c.holds(&[1.0, 1.0]));
        assert!(!c.holds(&[1.0, f64::NAN, 1.0]));
        assert!(CauchyCriterion::new(-1.0, 3).is_err());
        assert!(CauchyCriterion::new(0.1, 1).is_err());
    }

    #[test]
    fn verdict_combines_flags() {
        let r = ConvergenceReport::assemble(
            "n",
            vec![1.0, 2.0, 3.0],
            vec![GridPoint::Abscissa { x: 1.0 }],
            vec![vec![1.0, 1.0, 1.0]],
            CauchyCriterion::default(),
        );
        assert!(r.verdict);
        assert_eq!(r.limit_table, vec![1.0]);
        let r = r.with_nondegeneracy(false);
        assert!(r.converged && !r.verdict);
    }
}
