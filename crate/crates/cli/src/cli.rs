use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgd::experiment::Case;
use qgd::lcu::Mode;

#[derive(Debug, Parser)]
#[command(name = "qgd", version, about = "Gradient descent on the unit sphere via linear combinations of unitaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the circuit from a problem file until the step falls below the threshold.
    Optimize(OptimizeArgs),
    /// Rerun the two-qubit quartic experiment (cases s1, s2 or both).
    Repro(ReproArgs),
    /// Metric MDS by fixed-step descent on the stress.
    Mds(MdsArgs),
    /// Print Rayleigh quotients, coefficients and β at one point.
    EstimateCoeffs(CoeffArgs),
    /// Write the quartic experiment as a problem file.
    ExampleProblem(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Shots per circuit execution in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SamplingArgs {
    pub fn mode(&self) -> anyhow::Result<Mode> {
        match self.mode {
            ModeArg::Exact => Ok(Mode::Exact),
            ModeArg::Sampled if self.shots == 0 => anyhow::bail!("--shots must be at least 1 in sampled mode"),
            ModeArg::Sampled => Ok(Mode::Sampled {
                shots: self.shots,
                seed: self.seed,
            }),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Trajectory or table destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// JSON summary destination. Defaults to standard output when --out is
    /// given and standard error otherwise.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Start point as comma-separated coordinates; overrides the file's x0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    /// Depolarizing strength applied before purification each iteration.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    S1,
    S2,
    Both,
}

impl CaseArg {
    pub fn cases(self) -> Vec<Case> {
        match self {
            CaseArg::S1 => vec![Case::S1],
            CaseArg::S2 => vec![Case::S2],
            CaseArg::Both => Case::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub case: CaseArg,
    /// Step scale; the experiment default is 2 on the ½-prefactor form.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Run the cases on separate threads.
    #[arg(long)]
    pub parallel: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    /// Torgerson scaling of the dissimilarities.
    Classical,
    /// Uniform in [-1, 1) from --seed.
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct MdsArgs {
    /// Dissimilarities: CSV matrix, JSON matrix, or JSON object with
    /// `delta` and optional `weights`.
    #[arg(long)]
    pub delta: PathBuf,
    /// Weights in the same formats; all ones off the diagonal when absent.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Starting configuration, one point per row (CSV or JSON); overrides
    /// --init.
    #[arg(long)]
    pub x0: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "classical")]
    pub init: InitArg,
    /// Embedding dimension when no --x0 is given.
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Stop once a step lowers the stress by less than this.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Final coordinates as JSON.
    #[arg(long)]
    pub coords: Option<PathBuf>,
    /// Also push this column of the starting configuration through the
    /// circuit (needs a power-of-two point count).
    #[arg(long)]
    pub demo_column: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    /// Step scale entering β.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    /// Which experiment start point to embed as x0.
    #[arg(long, value_enum, default_value = "s2")]
    pub case: CaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
