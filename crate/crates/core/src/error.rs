use thiserror::Error;

pub type Result<T, E = EvtError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvtError {
    /// An argument lies outside the precondition of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not bracket u = {target}: last bracket was [{lo}, {hi}]")]
    Bracketing { target: f64, lo: f64, hi: f64 },

    /// A user-supplied function broke its declared contract
    /// (non-monotone cdf, cdf outside [0, 1], non-monotone normalizer, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate tail: flat quantile at eps = {eps} (u = {u}, v = {v})")]
    DegenerateTail { u: f64, v: f64, eps: f64 },

    #[error("inconsistent tail: scale function changes sign at eps = {eps}")]
    InconsistentTail { eps: f64 },

    #[error("degenerate normalization: a_n = 0 at n = {n} (flat upper quantile)")]
    DegenerateNormalization { n: u64 },

    #[error("unsupported base distribution: {0}")]
    UnsupportedBase(String),

    #[error("no n <= {n_max} found; a sufficient horizon is n_max >= {sufficient_horizon}")]
    NotFound { n_max: u64, sufficient_horizon: u64 },

    #[error("cannot parse distribution spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
}

impl EvtError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EvtError::Domain(msg.into())
    }
}

/// Rejects NaN and values outside the open unit interval.
pub(crate) fn check_open_unit(name: &str, u: f64) -> Result<()> {
    if u.is_nan() || u <= 0.0 || u >= 1.0 {
        return Err(EvtError::domain(format!("{name} = {u} must lie in (0, 1)")));
    }
    Ok(())
}

pub(crate) fn check_not_nan(name: &str, x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(EvtError::domain(format!("{name} is NaN")));
    }
    Ok(())
}
