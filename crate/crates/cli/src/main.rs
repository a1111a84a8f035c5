//! `brickwork`: generate codes, decode syndromes and run the Monte Carlo
//! studies. Data goes to stdout or `--out`; logs go to stderr.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 usage error,
//! 3 resource cap exceeded.

mod commands;
mod output;
mod parse;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brickwork_qec::tn::Backend;
use brickwork_qec::Variant;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "brickwork", version, about = "Random brickwork Clifford codes with tensor-network decoding")]
struct Cli {
    /// Worker threads for Monte Carlo trials [default: available parallelism]
    #[arg(long, global = true, value_parser = parse::positive)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an encoded code and write it in the code text format
    Gen(GenArgs),
    /// Decode one syndrome of a code file
    Decode(DecodeArgs),
    /// Bulk failure rates over a grid of depths and error rates
    Sweep(SweepArgs),
    /// Finite-size scaling fit and curve crossings of a sweep CSV
    Fit(FitArgs),
    /// Exponential decay of the bulk failure rate with depth at one p
    Decay(DecayArgs),
    /// Conditional failure correlations against separation
    Correlate(CorrelateArgs),
    /// Failure rate of every logical qubit
    Profile(ProfileArgs),
    /// Any-qubit failure rate with depth tied to log2 k / alpha
    Alpha(AlphaArgs),
    /// Hashing-bound threshold for a rate, or hashing rate for a noise level
    Hashing(HashingArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VariantArg {
    Standard,
    Greedy,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Greedy => Variant::Greedy,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BackendArg {
    Grid,
    Chain,
    Brute,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Grid => Backend::Grid,
            BackendArg::Chain => Backend::Chain,
            BackendArg::Brute => Backend::Brute,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SamplingArg {
    /// A new code per trial
    Fresh,
    /// One code per depth, drawn from the master seed
    Fixed,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum MeasureArg {
    #[value(name = "p_L_prime")]
    #[serde(rename = "p_L_prime")]
    PLPrime,
    #[value(name = "p_L")]
    #[serde(rename = "p_L")]
    PL,
}

#[derive(Args, Serialize)]
struct GenArgs {
    /// Qubits before boundary padding
    #[arg(long)]
    n: usize,
    /// Rate k/n as a decimal or fraction; 1/r must be an integer
    #[arg(long, value_parser = parse::rate_inverse)]
    #[serde(rename = "rate_inverse")]
    rate: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Syndrome bits, one `0`/`1` per check
    #[arg(long)]
    syndrome: String,
    /// Depolarizing error probability
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value = "grid")]
    backend: BackendArg,
    /// Largest boundary width before a resource error
    #[arg(long, default_value_t = brickwork_qec::tn::DEFAULT_MAX_WIDTH)]
    max_width: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_parser = parse::rate_inverse)]
    #[serde(rename = "rate_inverse")]
    rate: usize,
    /// Depths as a list `3,4,5` or range `a:b:step`
    #[arg(long, value_parser = parse::int_values)]
    depths: ::std::vec::Vec<usize>,
    /// Error rates as a list or range `a:b:step` (end excluded)
    #[arg(long, value_parser = parse::float_values)]
    ps: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Trials per point
    #[arg(long, value_parser = parse::positive, default_value_t = 20_000)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "fresh")]
    sampling: SamplingArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct FitArgs {
    /// Sweep CSV
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "p_L_prime")]
    measure: MeasureArg,
    /// Bootstrap resamples for the error bars
    #[arg(long, default_value_t = 1000)]
    bootstrap: usize,
    #[arg(long)]
    seed: u64,
    /// Crossing search interval [default: the sweep's p range]
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DecayArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Error rate to select from the sweep
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value = "p_L_prime")]
    measure: MeasureArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CorrelateArgs {
    #[arg(long, value_parser = parse::rate_inverse)]
    #[serde(rename = "rate_inverse")]
    rate: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 60)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_parser = parse::positive)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ProfileArgs {
    #[arg(long, value_parser = parse::rate_inverse)]
    #[serde(rename = "rate_inverse")]
    rate: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_parser = parse::positive)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "fresh")]
    sampling: SamplingArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct AlphaArgs {
    #[arg(long, value_parser = parse::rate_inverse)]
    #[serde(rename = "rate_inverse")]
    rate: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_parser = parse::float_values)]
    alphas: ::std::vec::Vec<f64>,
    /// System sizes before padding, as a list or range
    #[arg(long, value_parser = parse::int_values)]
    ns: ::std::vec::Vec<usize>,
    #[arg(long, value_parser = parse::positive)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct HashingArgs {
    /// Print the depolarizing threshold at which the hashing rate equals r
    #[arg(long, value_parser = parse::rate)]
    rate: Option<f64>,
    /// Print the hashing rate of depolarizing noise with strength p
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(brickwork_qec::Error),
    Io(std::io::Error),
    Other(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Other(format!("{}: {e}", path.display()))
    }

    pub fn json(e: serde_json::Error) -> Self {
        CliError::Other(format!("json: {e}"))
    }

    pub fn csv(e: csv::Error) -> Self {
        CliError::Other(format!("csv: {e}"))
    }

    fn exit_code(&self) -> u8 {
        use brickwork_qec::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Resource { .. }) => 3,
            CliError::Core(E::Degenerate(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Other(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<brickwork_qec::Error> for CliError {
    fn from(e: brickwork_qec::Error) -> Self {
        CliError::Core(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Decode(a) => commands::decode(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Fit(a) => commands::fit(&a),
        Command::Decay(a) => commands::decay(&a),
        Command::Correlate(a) => commands::correlate(&a),
        Command::Profile(a) => commands::profile(&a),
        Command::Alpha(a) => commands::alpha(&a),
        Command::Hashing(a) => commands::hashing(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(cli)),
        Err(e) => Err(CliError::Other(format!("thread pool: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
