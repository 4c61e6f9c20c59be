use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hardy-forge", version, about = "Exact and numerical checks of discrete Hardy and Rellich inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads; falls back to HARDY_FORGE_THREADS, then the core count.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Record wall-clock time in the summary (makes reports run-dependent).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Table of xi, alpha, beta, gamma and the printed gamma for one k.
    Constants(ConstantsArgs),
    /// Closed form of xi and the even binomial sums for every k up to a bound.
    Identity(IdentityArgs),
    /// Exact sine-weighted integral identities and bounds on random trigonometric polynomials.
    Lemma(LemmaArgs),
    /// Exact lattice/Fourier identities on random or given sequences.
    Parseval(ParsevalArgs),
    /// One inequality on a given sequence, or a seeded random suite.
    Verify(VerifyArgs),
    /// Quotients of the near-extremal family over a beta x N grid.
    Sharpness(SharpnessArgs),
    /// Smallest generalized eigenvalue of truncated pencils.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long = "k-max", default_value_t = 100)]
    pub k_max: u32,
    /// Binomial sums are checked for every n in [-n_max, n_max].
    #[arg(long = "n-max", default_value_t = 50)]
    pub n_max: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    /// Leibniz expansion of the k-th derivative of u·sin(x/2) (exact equality).
    SineProduct,
    /// Zero-average bound with constant 1/16.
    ZeroMean,
    /// Zero-average bound on the expansion.
    ZeroMeanExpansion,
    /// Weighted zero-average bound with sin^{2k}.
    WeightedZeroMean,
    /// Bound for u·sin²(x/2).
    DoubleSine,
    /// Closed forms for single modes times sin(x/2).
    ModeIntegrals,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    #[arg(long, value_enum)]
    pub lemma: LemmaKind,
    /// Largest derivative order (or mode exponent bound for mode-integrals).
    #[arg(long, default_value_t = 5)]
    pub k: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Polynomial as JSON [[index, "re", "im"], ...] instead of random draws.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ParsevalArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sequence as JSON {"lo", "hi", "values"} instead of random draws.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long = "window-lo", default_value_t = -30, allow_hyphen_values = true)]
    pub window_lo: i64,
    #[arg(long = "window-hi", default_value_t = 60, allow_hyphen_values = true)]
    pub window_hi: i64,
    /// Check this sequence instead of running the random suite.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SharpnessArgs {
    /// cor22 or cor24.
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub k: u32,
    /// Explicit beta values; default is (1-2k)/2 - 2^-j for j = 1..beta-steps.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Option<Vec<f64>>,
    #[arg(long = "beta-steps", default_value_t = 10)]
    pub beta_steps: u32,
    #[arg(long = "N", alias = "n", value_delimiter = ',', default_values_t = [100u64, 1000, 10000, 100000, 1000000])]
    pub n: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long = "N", alias = "n", value_delimiter = ',', default_values_t = [100i64, 1000, 10000])]
    pub n: Vec<i64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
