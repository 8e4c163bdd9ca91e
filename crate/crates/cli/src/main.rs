//! `qfgrowth`: reproducible Fourier-growth experiments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::Format;

#[derive(Parser)]
#[command(name = "qfgrowth", version, about = "Fourier growth experiments for noisy quantum query models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command.
#[derive(Args, Clone, Debug, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct GrowthArgs {
    /// BQP, DQCK or HALF_BQP.
    #[arg(long, default_value = "DQCK")]
    pub model: qfgrowth::Model,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub w: u32,
    /// Clean qubits (default: 1 for DQCK, 0 otherwise).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Pattern over `+-*`, or `random:p` for a fresh restriction per trial.
    #[arg(long)]
    pub restriction: Option<String>,
    /// Algorithm document (JSON) used instead of random algorithms.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub w: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Number of matrices in the product.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Tracked parity coordinates (default: min(N, 4)).
    #[arg(long)]
    pub n_tilde: Option<usize>,
    /// Equality pairs.
    #[arg(long, default_value_t = 0)]
    pub pairs: usize,
    /// Memory steps.
    #[arg(long, default_value_t = 0)]
    pub memory: usize,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Uniform,
    Forrelated,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ForrelationArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Promise gap parameter (default: (log₂ N)^(−k)).
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Generator::Uniform)]
    pub generator: Generator,
    /// Instance document (JSON) to classify instead of generated ones.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct TightnessArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SpectrumArgs {
    /// Algorithm document (JSON).
    #[arg(long, conflicts_with = "table")]
    pub spec: Option<PathBuf>,
    /// JSON array with a truth table of length 2^N (bit i of the index set means x_i = −1).
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub restriction: Option<String>,
    /// Coefficients at or below this magnitude are omitted.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ReduceArgs {
    /// Clean qubits traded for noisy ones.
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub w: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct HybridArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub w: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Decision-tree depth (default: d).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long)]
    pub restriction: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Observed Fourier growth of random algorithms against the proven ceilings.
    Growth(GrowthArgs),
    /// Check the matrix decomposition against brute force on random products.
    VerifyDecomposition(VerifyArgs),
    /// Evaluate and classify Forrelation instances.
    Forrelation(ForrelationArgs),
    /// Spectrum of the trace circuit that meets the DQC1 ceiling's N-dependence.
    Tightness(TightnessArgs),
    /// Fourier coefficients of an algorithm or a truth table.
    Spectrum(SpectrumArgs),
    /// Clean-qubit reduction: pointwise bias scaling on random DQC(k) algorithms.
    Reduce(ReduceArgs),
    /// Growth of random decision-tree hybrids of DQC(k) algorithms.
    HybridGrowth(HybridArgs),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Growth(a) => &a.common,
            Command::VerifyDecomposition(a) => &a.common,
            Command::Forrelation(a) => &a.common,
            Command::Tightness(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Reduce(a) => &a.common,
            Command::HybridGrowth(a) => &a.common,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.command.common().workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Growth(a) => commands::growth(a),
        Command::VerifyDecomposition(a) => commands::verify_decomposition(a),
        Command::Forrelation(a) => commands::forrelation(a),
        Command::Tightness(a) => commands::tightness(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::HybridGrowth(a) => commands::hybrid_growth(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("FAIL: a certified check was violated");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
