//! Command-line front end for `renyi-xent`.
//!
//! `parse_args` turns an argument list into a validated [`JobSpec`]; `run`
//! evaluates it and renders the output. The binary only prints what `run`
//! returns and exits with its code: 0 on success, 2 when a result diverges,
//! 1 on any error.

mod dispatch;
mod input;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use renyi_xent::discrete::DiscreteDistribution;
use renyi_xent::gaussian_process::StationaryGaussianSpec;
use renyi_xent::markov::MarkovSource;
use renyi_xent::{AlphaOrder, ExpFamilyDistribution, SupportSpec};

pub use dispatch::{evaluate, run, Evaluation, RunOutput};
pub use output::{emit_sweep, format_sig, SweepCsv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` / `--version` text; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown family '{0}' (expected beta, chi-squared, exponential, gamma, gaussian, laplace or mvn)")]
    UnknownFamily(String),
    #[error("malformed parameter: {0}")]
    MalformedParameter(String),
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {msg}", path.display())]
    Csv { path: PathBuf, msg: String },
    #[error("{module}: {source}")]
    Library {
        module: &'static str,
        #[source]
        source: renyi_xent::Error,
    },
    #[error("sweep produced no results")]
    EmptySweep,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    XentDiscrete,
    XentExpFam,
    XentSpecial,
    RateMarkov,
    RateGauss,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialKind {
    /// q uniform on --support: ln|S| for every p on S
    QUniform,
    /// p uniform on --support against q = --family/--q
    PUniform,
    /// q = Exponential(--lambda)
    QExponential,
    /// q = N(--mu, --var)
    QGaussian,
    /// q half-normal with scale --var
    QHalfNormal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecialCase {
    QUniform { support: SupportSpec, p: Option<ExpFamilyDistribution> },
    PUniform { support: SupportSpec, q: ExpFamilyDistribution },
    QExponential { p: ExpFamilyDistribution, lambda: f64 },
    QGaussian { p: ExpFamilyDistribution, mu: f64, var: f64 },
    QHalfNormal { p: ExpFamilyDistribution, var: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Inputs {
    Discrete { p: DiscreteDistribution, q: DiscreteDistribution },
    ExpFam { p: ExpFamilyDistribution, q: ExpFamilyDistribution },
    Special(SpecialCase),
    Markov { p: MarkovSource, q: MarkovSource, finite_n: usize },
    Gauss { p: StationaryGaussianSpec, q: StationaryGaussianSpec, finite_n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Single(AlphaOrder),
    Grid(Vec<AlphaOrder>),
}

impl AlphaSpec {
    pub fn orders(&self) -> &[AlphaOrder] {
        match self {
            AlphaSpec::Single(a) => std::slice::from_ref(a),
            AlphaSpec::Grid(g) => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    /// Subcommand path as typed, e.g. `xent expfam`.
    pub name: String,
    pub inputs: Inputs,
    pub alpha: AlphaSpec,
    pub oracle_check: bool,
    pub output_format: OutputFormat,
    pub bits: bool,
}

pub const DEFAULT_MARKOV_N: usize = 4000;
pub const DEFAULT_GAUSS_N: usize = 2048;

#[derive(Parser, Debug)]
#[command(name = "renyi", version, about = "Rényi cross-entropies and cross-entropy rates (in nats)")]
struct Cli {
    #[command(subcommand)]
    command: Top,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Report bits instead of nats
    #[arg(long, global = true)]
    bits: bool,
    /// Also compute an independent numerical value and the absolute gap
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Cross-entropy between two distributions
    Xent {
        #[command(subcommand)]
        which: XentCmd,
    },
    /// Cross-entropy rate between two sources
    Rate {
        #[command(subcommand)]
        which: RateCmd,
    },
    /// Cross-entropy over a grid of orders, as CSV by default
    Sweep {
        #[command(subcommand)]
        which: SweepCmd,
    },
}

#[derive(Subcommand, Debug)]
enum XentCmd {
    /// Two probability vectors (inline `0.2,0.8` or a one-line CSV file)
    Discrete(DiscreteArgs),
    /// Two members of one exponential family
    Expfam(ExpFamArgs),
    /// One side uniform, exponential or Gaussian
    Special(SpecialArgs),
}

#[derive(Subcommand, Debug)]
enum RateCmd {
    /// Markov sources from transition-matrix CSV files
    Markov(MarkovArgs),
    /// Stationary Gaussian processes (`white:VAR`, `ar1:RHO,VAR` or an autocovariance file)
    Gauss(GaussArgs),
}

#[derive(Subcommand, Debug)]
enum SweepCmd {
    Expfam(ExpFamSweepArgs),
    Discrete(DiscreteSweepArgs),
}

#[derive(Args, Debug)]
struct DiscreteArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Order: a positive number, `1`/`shannon`, or `inf`
    #[arg(long)]
    alpha: String,
}

#[derive(Args, Debug)]
struct ExpFamArgs {
    /// beta, chi-squared, exponential, gamma, gaussian, laplace, mvn
    #[arg(long)]
    family: String,
    /// key=value list, e.g. `mu=0,var=1`; a covariance CSV for mvn
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    alpha: String,
}

#[derive(Args, Debug)]
struct SpecialArgs {
    #[arg(long = "case", value_enum)]
    kind: SpecialKind,
    /// Family of the non-special side
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// `lo:hi`
    #[arg(long)]
    support: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    var: Option<f64>,
    #[arg(long)]
    alpha: String,
}

#[derive(Args, Debug)]
struct MarkovArgs {
    /// Transition matrix of p: K lines of K probabilities
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Initial distribution of p (default uniform)
    #[arg(long)]
    p_init: Option<String>,
    #[arg(long)]
    q_init: Option<String>,
    #[arg(long)]
    alpha: String,
    /// Block length of the finite-n oracle
    #[arg(long)]
    finite_n: Option<usize>,
}

#[derive(Args, Debug)]
struct GaussArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    alpha: String,
    /// Block length of the finite-n oracle
    #[arg(long)]
    finite_n: Option<usize>,
}

#[derive(Args, Debug)]
struct ExpFamSweepArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// `start:stop:step` and/or single orders, comma separated
    #[arg(long)]
    alphas: String,
}

#[derive(Args, Debug)]
struct DiscreteSweepArgs {
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    alphas: String,
}

fn required<T>(v: Option<T>, flag: &str, case: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--case {case} needs {flag}")))
}

fn markov_source(matrix: &str, init: Option<&str>, name: &str) -> Result<MarkovSource, CliError> {
    let m = input::read_matrix(matrix)?;
    let initial = match init {
        Some(raw) => input::parse_distribution(name, raw)?,
        None => DiscreteDistribution::uniform(m.nrows()).map_err(|e| CliError::MalformedParameter(e.to_string()))?,
    };
    MarkovSource::new(m, initial).map_err(|e| CliError::MalformedParameter(format!("{matrix}: {e}")))
}

fn special_case(a: &SpecialArgs) -> Result<SpecialCase, CliError> {
    let case = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let p_dist = |family: &Option<String>, p: &Option<String>| -> Result<ExpFamilyDistribution, CliError> {
        input::parse_expfam(
            "--p",
            required(family.as_deref(), "--family", &case)?,
            required(p.as_deref(), "--p", &case)?,
        )
    };
    Ok(match a.kind {
        SpecialKind::QUniform => SpecialCase::QUniform {
            support: input::parse_support(required(a.support.as_deref(), "--support", &case)?)?,
            p: match (&a.family, &a.p) {
                (Some(_), Some(_)) => Some(p_dist(&a.family, &a.p)?),
                _ => None,
            },
        },
        SpecialKind::PUniform => SpecialCase::PUniform {
            support: input::parse_support(required(a.support.as_deref(), "--support", &case)?)?,
            q: input::parse_expfam(
                "--q",
                required(a.family.as_deref(), "--family", &case)?,
                required(a.q.as_deref(), "--q", &case)?,
            )?,
        },
        SpecialKind::QExponential => SpecialCase::QExponential {
            p: p_dist(&a.family, &a.p)?,
            lambda: required(a.lambda, "--lambda", &case)?,
        },
        SpecialKind::QGaussian => SpecialCase::QGaussian {
            p: p_dist(&a.family, &a.p)?,
            mu: a.mu.unwrap_or(0.0),
            var: required(a.var, "--var", &case)?,
        },
        SpecialKind::QHalfNormal => SpecialCase::QHalfNormal {
            p: p_dist(&a.family, &a.p)?,
            var: required(a.var, "--var", &case)?,
        },
    })
}

/// Parses and validates a full argument list (`argv[0]` is the program name).
/// Distribution files are read here, so a returned job is ready to run.
pub fn parse_args<I, T>(argv: I) -> Result<JobSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Help(e.render().to_string()),
        _ => CliError::Usage(e.render().to_string().trim_end().to_string()),
    })?;

    let single = |raw: &str| input::parse_alpha(raw).map(AlphaSpec::Single);
    let (command, name, inputs, alpha) = match &cli.command {
        Top::Xent { which: XentCmd::Discrete(a) } => (
            Command::XentDiscrete,
            "xent discrete",
            Inputs::Discrete {
                p: input::parse_distribution("--p", &a.p)?,
                q: input::parse_distribution("--q", &a.q)?,
            },
            single(&a.alpha)?,
        ),
        Top::Xent { which: XentCmd::Expfam(a) } => (
            Command::XentExpFam,
            "xent expfam",
            Inputs::ExpFam {
                p: input::parse_expfam("--p", &a.family, &a.p)?,
                q: input::parse_expfam("--q", &a.family, &a.q)?,
            },
            single(&a.alpha)?,
        ),
        Top::Xent { which: XentCmd::Special(a) } => (
            Command::XentSpecial,
            "xent special",
            Inputs::Special(special_case(a)?),
            single(&a.alpha)?,
        ),
        Top::Rate { which: RateCmd::Markov(a) } => (
            Command::RateMarkov,
            "rate markov",
            Inputs::Markov {
                p: markov_source(&a.p, a.p_init.as_deref(), "--p-init")?,
                q: markov_source(&a.q, a.q_init.as_deref(), "--q-init")?,
                finite_n: a.finite_n.unwrap_or(DEFAULT_MARKOV_N),
            },
            single(&a.alpha)?,
        ),
        Top::Rate { which: RateCmd::Gauss(a) } => (
            Command::RateGauss,
            "rate gauss",
            Inputs::Gauss {
                p: input::parse_process("--p", &a.p)?,
                q: input::parse_process("--q", &a.q)?,
                finite_n: a.finite_n.unwrap_or(DEFAULT_GAUSS_N),
            },
            single(&a.alpha)?,
        ),
        Top::Sweep { which: SweepCmd::Expfam(a) } => (
            Command::Sweep,
            "sweep expfam",
            Inputs::ExpFam {
                p: input::parse_expfam("--p", &a.family, &a.p)?,
                q: input::parse_expfam("--q", &a.family, &a.q)?,
            },
            AlphaSpec::Grid(input::parse_alpha_grid(&a.alphas)?),
        ),
        Top::Sweep { which: SweepCmd::Discrete(a) } => (
            Command::Sweep,
            "sweep discrete",
            Inputs::Discrete {
                p: input::parse_distribution("--p", &a.p)?,
                q: input::parse_distribution("--q", &a.q)?,
            },
            AlphaSpec::Grid(input::parse_alpha_grid(&a.alphas)?),
        ),
    };
    if let Inputs::Markov { finite_n: 0, .. } | Inputs::Gauss { finite_n: 0, .. } = inputs {
        return Err(CliError::MalformedParameter("--finite-n must be positive".into()));
    }
    Ok(JobSpec {
        command,
        name: name.to_string(),
        inputs,
        alpha,
        oracle_check: cli.oracle,
        output_format: cli.format,
        bits: cli.bits,
    })
}
