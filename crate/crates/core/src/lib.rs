//! Numerical laboratory for the extremes of i.i.d. samples.
//!
//! * [`dist`]: distribution models with generalized-inverse quantiles and
//!   quantile-transform sampling.
//! * [`maxima`]: exact laws and samplers of the sample maximum, and the
//!   normalized quantile functions `h_n`.
//! * [`linear_evt`]: affine normalization (de Haan ratios, `k_rho`, tail
//!   index, norming constants, limit law, type classification).
//! * [`nonlinear_evt`]: monotone nonlinear normalizations and their
//!   convergence diagnostics.
//! * [`geometric`]: the geometric law, whose maxima oscillate forever.
//! * [`stats`]: empirical cdfs, Kolmogorov–Smirnov distances, random streams.
//! * [`export`]: CSV and JSON encodings of the reports.

pub mod dist;
pub mod error;
pub mod export;
pub mod geometric;
pub mod linear_evt;
pub mod maxima;
pub mod nonlinear_evt;
pub mod report;
pub mod stats;

pub use dist::{Distribution, Kind, Support};
pub use error::{EvtError, Result};
pub use geometric::{GeometricParams, OscillationReport};
pub use linear_evt::{NormingConstants, RhoEstimate, TypeClass};
pub use maxima::{HnVariant, MaxLaw, NormalizingSequence};
pub use report::{CauchyCriterion, ConvergenceReport};
pub use stats::{KsResult, RandomStream, Significance};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
