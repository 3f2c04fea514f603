use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable supplying the default seed. Flags always win.
pub const SEED_ENV: &str = "ARSPEC_SEED";

#[derive(Debug, Parser)]
#[command(name = "arspec", version, about = "Autoregressive spectral estimation in 1D and 2D")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a complex sinusoid with exact-SNR noise.
    Gen(GenArgs),
    /// Generate a complex Gaussian random grid.
    GenGrid(GenGridArgs),
    /// Estimate a 1D AR model from a signal CSV.
    Est1d(Est1dArgs),
    /// Estimate a 2D AR model and its quarter-plane filter from a grid CSV.
    Est2d(Est2dArgs),
    /// Evaluate the AR spectrum of a model or filter JSON.
    Spectrum(SpectrumArgs),
    /// Run one of the reference experiments.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "parameters", rename_all = "kebab-case")]
pub enum Experiment {
    /// One spectrum per phase of a swept sinusoid.
    PhaseSweep(PhaseSweepArgs),
    /// One spectrum per model order on a single signal.
    OrderSweep(OrderSweepArgs),
    /// Residual MSE against model order for several methods.
    MseVsOrder(MseVsOrderArgs),
    /// Estimator equivalence checks over random inputs (JSON verdict).
    Equivalence(EquivalenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method1D {
    Levinson,
    Burg,
    BurgMod,
}

impl Method1D {
    pub fn name(self) -> &'static str {
        match self {
            Method1D::Levinson => "levinson",
            Method1D::Burg => "burg",
            Method1D::BurgMod => "burg-mod",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method2D {
    Wwra,
    Burg2d,
    Burg2dMod,
}

impl Method2D {
    pub fn name(self) -> &'static str {
        match self {
            Method2D::Wwra => "wwra",
            Method2D::Burg2d => "burg2d",
            Method2D::Burg2dMod => "burg2d-mod",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    /// Number of samples.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Normalized frequency in cycles/sample, in [-0.5, 0.5).
    #[arg(long, default_value_t = 0.25)]
    pub freq: f64,
    /// Phase in radians.
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
    /// Signal-to-noise ratio in dB.
    #[arg(long, default_value_t = 30.0)]
    pub snr_db: f64,
    /// Emit the bare sinusoid (ignores --snr-db).
    #[arg(long)]
    pub noiseless: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Signal CSV to write.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenGridArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Est1dArgs {
    /// Signal CSV (`index,re,im`).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Model JSON to write.
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method1D,
    #[arg(long)]
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Est2dArgs {
    /// Grid CSV (`k,t,re,im`).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Model JSON to write.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Quarter-plane filter JSON to write.
    #[arg(long)]
    pub filter_output: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method2D,
    #[arg(long)]
    pub n1: usize,
    #[arg(long)]
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    /// 1D model, 2D model or filter JSON.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Spectrum CSV to write.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Frequency bins (first axis for 2D).
    #[arg(long, default_value_t = 1024)]
    pub nfreq: usize,
    /// Bins along the second axis for 2D inputs; defaults to --nfreq.
    #[arg(long)]
    pub nfreq2: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PhaseSweepArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Method1D::Levinson)]
    pub method: Method1D,
    #[arg(long, default_value_t = 15)]
    pub order: usize,
    #[arg(long, default_value_t = 1024)]
    pub nfreq: usize,
    /// Linear-power matrix CSV; the log10 matrix goes next to it.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OrderSweepArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long, value_enum, default_value_t = Method1D::Levinson)]
    pub method: Method1D,
    #[arg(long, default_value_t = 19)]
    pub max_order: usize,
    #[arg(long, default_value_t = 1024)]
    pub nfreq: usize,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MseVsOrderArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long, default_value_t = 19)]
    pub max_order: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "burg,burg-mod,levinson")]
    pub methods: Vec<Method1D>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EquivalenceArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
    /// Verdict JSON to write.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long, short)]
    pub manifest: PathBuf,
    /// Write outputs into this directory instead of their recorded paths.
    #[arg(long)]
    pub into: Option<PathBuf>,
}

fn relocate(path: &mut PathBuf, dir: &Path) {
    if let Some(name) = path.file_name() {
        *path = dir.join(name);
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::GenGrid(_) => "gen-grid",
            Command::Est1d(_) => "est1d",
            Command::Est2d(_) => "est2d",
            Command::Spectrum(_) => "spectrum",
            Command::Experiment(Experiment::PhaseSweep(_)) => "experiment phase-sweep",
            Command::Experiment(Experiment::OrderSweep(_)) => "experiment order-sweep",
            Command::Experiment(Experiment::MseVsOrder(_)) => "experiment mse-vs-order",
            Command::Experiment(Experiment::Equivalence(_)) => "experiment equivalence",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Gen(a) => Some(a.synth.seed),
            Command::GenGrid(a) => Some(a.seed),
            Command::Experiment(Experiment::PhaseSweep(a)) => Some(a.synth.seed),
            Command::Experiment(Experiment::OrderSweep(a)) => Some(a.synth.seed),
            Command::Experiment(Experiment::MseVsOrder(a)) => Some(a.synth.seed),
            Command::Experiment(Experiment::Equivalence(a)) => Some(a.seed),
            _ => None,
        }
    }

    /// Moves every output path into `dir`, keeping file names. Inputs are
    /// left alone.
    pub fn redirect_outputs(&mut self, dir: &Path) {
        match self {
            Command::Gen(a) => relocate(&mut a.output, dir),
            Command::GenGrid(a) => relocate(&mut a.output, dir),
            Command::Est1d(a) => relocate(&mut a.output, dir),
            Command::Est2d(a) => {
                relocate(&mut a.output, dir);
                relocate(&mut a.filter_output, dir);
            }
            Command::Spectrum(a) => relocate(&mut a.output, dir),
            Command::Experiment(Experiment::PhaseSweep(a)) => relocate(&mut a.output, dir),
            Command::Experiment(Experiment::OrderSweep(a)) => relocate(&mut a.output, dir),
            Command::Experiment(Experiment::MseVsOrder(a)) => relocate(&mut a.output, dir),
            Command::Experiment(Experiment::Equivalence(a)) => relocate(&mut a.output, dir),
            Command::Replay(_) => {}
        }
    }
}
