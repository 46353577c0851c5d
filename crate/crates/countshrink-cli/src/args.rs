//! Command-line surface: subcommands, flags, and their defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use countshrink::FitConfig;

#[derive(Debug, Parser)]
#[command(
    name = "countshrink",
    version,
    about = "Shrinkage estimation, multiple testing, and simulation for sparse Poisson counts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the shrinkage prior by empirical Bayes and emit per-observation
    /// posterior estimates.
    Fit(FitArgs),
    /// Fit, then split the posterior inclusion weights into signal and null.
    Test(TestArgs),
    /// Run a seeded simulation suite and write its result table.
    Simulate(SimulateArgs),
    /// Time the estimation pipelines on a synthetic sparse panel.
    Bench(BenchArgs),
}

/// Flags shared by every command that reads a CSV of counts.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file of observed counts.
    #[arg(long)]
    pub input: PathBuf,

    /// Column holding the counts (a 0-based index with --no-header).
    #[arg(long, default_value = "count")]
    pub count_col: String,

    /// Column holding a constant exposure; reported rates divide by it.
    #[arg(long)]
    pub exposure_col: Option<String>,

    /// Column holding observation labels [default: "id" when present].
    #[arg(long)]
    pub label_col: Option<String>,

    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,

    /// Input has no header row; address columns by 0-based index.
    #[arg(long)]
    pub no_header: bool,
}

/// Flags controlling the prior and the hyperparameter search.
#[derive(Debug, Args)]
pub struct PriorArgs {
    /// Prior shape α of the count-level gamma kernel.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,

    /// Pin γ at this value instead of estimating it.
    #[arg(long, conflicts_with = "gamma_max")]
    pub gamma: Option<f64>,

    /// Upper end of the γ search range.
    #[arg(long, default_value_t = 20.0)]
    pub gamma_max: f64,

    /// Lower end of the τ search range.
    #[arg(long, default_value_t = 1e-6)]
    pub tau_min: f64,

    /// Estimate α along with τ and γ.
    #[arg(long)]
    pub fit_alpha: bool,

    /// Coarse-grid nodes per search axis.
    #[arg(long, default_value_t = 40)]
    pub grid_points: usize,

    /// Simplex refinement steps after the grid search.
    #[arg(long, default_value_t = 200)]
    pub refine_iters: usize,
}

impl PriorArgs {
    /// The search configuration these flags describe (not yet validated).
    pub fn to_config(&self) -> FitConfig {
        FitConfig {
            alpha: self.alpha,
            tau_range: (self.tau_min, 1.0),
            gamma_range: self.gamma.map_or((0.0, self.gamma_max), |g| (g, g)),
            grid_points: self.grid_points,
            refine_iters: self.refine_iters,
            fit_alpha: self.fit_alpha,
            ..FitConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub prior: PriorArgs,

    /// Results file to write (sidecar metadata goes next to it).
    #[arg(long)]
    pub out: PathBuf,
}

/// Which decision pipeline `test` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestMethod {
    /// Full fit: τ and γ both estimated.
    Gh,
    /// γ pinned at 1 (horseshoe-style prior); τ estimated.
    Hs,
    /// Nonparametric mixture MLE with the same thresholding rule.
    Kw,
}

impl TestMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            TestMethod::Gh => "gh",
            TestMethod::Hs => "hs",
            TestMethod::Kw => "kw",
        }
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub prior: PriorArgs,

    /// Decision pipeline.
    #[arg(long, value_enum, default_value_t = TestMethod::Gh)]
    pub method: TestMethod,

    /// Results file to write (sidecar metadata goes next to it).
    #[arg(long)]
    pub out: PathBuf,
}

/// Which replication suite `simulate` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Estimation risk of all methods over the sparse folded-t grid.
    Table1,
    /// Misclassification of the induced test over a sparsity sweep.
    Table2,
    /// Empirical type-1 rate of the half-threshold rule versus its bound.
    Type1,
}

impl Suite {
    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
            Suite::Type1 => "type1",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Which suite to run.
    #[arg(value_enum)]
    pub suite: Suite,

    /// Seed for every replication stream in the run.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Replications per scenario cell (null draws per γ for type1).
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,

    /// Results file to write (sidecar metadata goes next to it).
    #[arg(long)]
    pub out: PathBuf,

    /// Check the suite's published accuracy bands; violations exit 3.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Observations in the synthetic panel.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,

    /// Seed for the synthetic panel.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Timed repetitions per pipeline.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,

    /// Results file to write (sidecar metadata goes next to it).
    #[arg(long)]
    pub out: PathBuf,
}
