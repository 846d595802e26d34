//! Empirical distribution functions, Kolmogorov–Smirnov distances and the
//! random-stream contract shared by every sampler.

mod ks;
mod stream;

pub use ks::{ks_one_sample, ks_two_sample, KsResult, Significance};
pub use stream::{RandomStream, SEED_ENV_VAR};

use crate::error::{EvtError, Result};

/// Right-continuous step function `x -> #{samples <= x} / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(EvtError::domain("empirical cdf of an empty sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(EvtError::domain("sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&s| s <= x);
        count as f64 / self.sorted.len() as f64
    }
}

/// `ecdf_eval` over a raw sample.
pub fn ecdf_eval(samples: &[f64], x: f64) -> Result<f64> {
    Ok(EmpiricalCdf::new(samples.to_vec())?.eval(x))
}
