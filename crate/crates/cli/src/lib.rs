//! `evtlab` command line: one subcommand per experiment, CSV or JSON out.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 negative verdict
//! (not converged, degenerate, oscillating, no witness), 4 unwritable output.

mod commands;
pub mod output;
pub mod range;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use evtlab_core::maxima::MaxSampler;
use evtlab_core::{EvtError, HnVariant};

use output::{Format, Verdict};
use range::{parse_count, parse_pair, Range};

pub const SEED_ENV: &str = "EVTLAB_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_WRITE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "evtlab",
    version,
    about = "Extreme-value experiments on i.i.d. maxima"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Random seed; defaults to $EVTLAB_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Exponential,
}

impl From<Method> for MaxSampler {
    fn from(m: Method) -> Self {
        match m {
            Method::Direct => MaxSampler::Direct,
            Method::Exponential => MaxSampler::ExponentialRep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Exp,
    Linear,
    Epsilon,
}

impl From<Variant> for HnVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Exp => HnVariant::ExpForm,
            Variant::Linear => HnVariant::LinearForm,
            Variant::Epsilon => HnVariant::EpsilonForm,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantile-transform draws from a distribution.
    Sample {
        #[arg(long)]
        dist: String,
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        count: u64,
    },
    /// Draws of the maximum of n i.i.d. variables.
    Max {
        #[arg(long)]
        dist: String,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        count: u64,
        #[arg(long, value_enum, default_value = "exponential")]
        method: Method,
    },
    /// de Haan ratio convergence test over a shrinking tail grid.
    Dehaan {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value = "1e-2:1e-6")]
        eps: Range,
        /// A `u,v` pair; repeat for several. Defaults to all pairs of 1/4, 1/2, 2, 3, 4.
        #[arg(long, value_parser = parse_pair)]
        uv: Vec<(f64, f64)>,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Tail index estimate and extreme-value type.
    Rho {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value = "1e-2:1e-6")]
        eps: Range,
        #[arg(long, default_value_t = 2.0)]
        w: f64,
        /// Classification tolerance around zero.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// Norming constants a_n, b_n.
    Norming {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: Range,
    },
    /// Normalized maxima against the limit law.
    LimitLaw {
        #[arg(long)]
        dist: String,
        #[arg(long, value_parser = parse_count, default_value = "1e4")]
        n: u64,
        #[arg(long, value_parser = parse_count, default_value = "1e5")]
        reps: u64,
        /// Limit shape; estimated from the tail when omitted.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<f64>,
        /// Largest KS distance counted as agreement.
        #[arg(long, default_value_t = 0.02)]
        max_distance: f64,
    },
    /// Convergence of a quantile-matching normalization to a target law.
    Nonlinear {
        /// Target law.
        #[arg(long)]
        dist: String,
        #[arg(long, default_value = "uniform")]
        base: String,
        #[arg(long, default_value = "1e2:1e6")]
        n: Range,
        #[arg(long, default_value = "0.0625:16:32")]
        x: Range,
        #[arg(long, value_enum, default_value = "exp")]
        variant: Variant,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// P{M_n <= floor(theta log n) + q} for the geometric law.
    GeomOscillate {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, default_value = "1e3:1e6")]
        n: Range,
        /// Cluster offsets in [0, 1), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75")]
        c: Vec<f64>,
        /// Largest lim sup - lim inf counted as convergence.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Smallest n with frac(theta log n) in [x, y).
    GeomDensity {
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        theta: Option<f64>,
        /// Geometric parameter; sets theta = -1/log p.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, value_parser = parse_count, default_value = "1e15")]
        n_max: u64,
    },
}

/// Failure of a run, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(EvtError),
    Write(String),
}

impl From<EvtError> for Failure {
    fn from(e: EvtError) -> Self {
        Failure::Domain(e)
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!("{SEED_ENV}={v} is not a 64-bit unsigned integer"))
        }),
        Err(_) => Ok(0),
    }
}

/// Parses `argv` (program name first), runs, writes output, returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(verdict) => match verdict {
            Verdict::Positive => EXIT_OK,
            Verdict::Negative(reason) => {
                eprintln!("verdict: {reason}");
                EXIT_NEGATIVE
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            match e {
                EvtError::NotFound { .. } => EXIT_NEGATIVE,
                _ => EXIT_DOMAIN,
            }
        }
        Err(Failure::Write(msg)) => {
            eprintln!("error: {msg}");
            EXIT_WRITE
        }
    }
}

fn execute(cli: &Cli) -> Result<Verdict, Failure> {
    let seed = resolve_seed(cli.common.seed)?;
    let doc = commands::dispatch(&cli.command, seed)?;
    let text = doc.render(cli.common.format);
    output::write(&text, cli.common.out.as_deref()).map_err(|e| {
        let target = cli
            .common
            .out
            .as_ref()
            .map_or("stdout".to_string(), |p| p.display().to_string());
        Failure::Write(format!("cannot write {target}: {e}"))
    })?;
    Ok(doc.verdict)
}
