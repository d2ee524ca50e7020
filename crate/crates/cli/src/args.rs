use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "raysearch", version, about = "Search strategies for w rays with lambda robots")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Det,
    Rand,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form ratios and constants for one instance.
    Ratio(Instance),
    /// Emit the full plan for a strategy.
    Plan(PlanArgs),
    /// Run a strategy against one goal.
    Simulate(SimulateArgs),
    /// Worst case of the deterministic strategy over adversarial goals.
    Adversary(AdversaryArgs),
    /// Monte Carlo mean ratio of the randomized strategy.
    Mc(McArgs),
    /// Ratio sequences, cyclic conversion and witnesses.
    Seq(SeqArgs),
    /// The series functional for a geometric sequence.
    Gfun(GfunArgs),
    /// Read a plan as a time-sliced hybrid algorithm.
    Schedule(PlanArgs),
    /// Ratios over a grid of (w, lambda, n) as CSV rows.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Instance {
    /// Number of rays.
    #[arg(long)]
    pub w: usize,
    /// Number of robots.
    #[arg(long)]
    pub lambda: usize,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value_t = StrategyArg::Det)]
    pub strategy: StrategyArg,
    /// Number of stages (rounds for the deterministic strategy).
    #[arg(long)]
    pub horizon: usize,
    /// Required for the randomized strategy.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value_t = StrategyArg::Det)]
    pub strategy: StrategyArg,
    /// Ray holding the goal.
    #[arg(long, default_value_t = 0)]
    pub path: usize,
    /// Goal distance from the origin, at least 1.
    #[arg(long)]
    pub distance: f64,
    /// Fixed horizon; sized from the distance when omitted.
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Largest goal distance considered.
    #[arg(long)]
    pub n_max: f64,
    /// How far past each turn point the goal is hidden.
    #[arg(long, default_value_t = raysearch::simulator::ADVERSARY_OFFSET)]
    pub offset: f64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Goal distance.
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0)]
    pub path: usize,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long)]
    pub w: usize,
    /// Comma-separated extents.
    #[arg(long, value_delimiter = ',', conflicts_with = "rate")]
    pub values: Option<Vec<f64>>,
    /// Comma-separated ray labels; turns the input into a w-sequence.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<usize>>,
    /// Geometric extents `rate^(i-1)` instead of explicit values.
    #[arg(long, requires = "len")]
    pub rate: Option<f64>,
    #[arg(long)]
    pub len: Option<usize>,
    /// Number of trailing ratios used for the limsup proxy.
    #[arg(long, default_value_t = 50)]
    pub window: usize,
}

#[derive(Debug, Args)]
pub struct GfunArgs {
    #[arg(long)]
    pub w: usize,
    #[arg(long)]
    pub epsilon: f64,
    /// Tail growth rate.
    #[arg(long)]
    pub rate: f64,
    /// Explicit leading terms, starting with 1.
    #[arg(long, value_delimiter = ',')]
    pub prefix: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-12)]
    pub trunc_tol: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub w: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<usize>,
    /// Goal distances (the adversary's bound for the deterministic strategy).
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<f64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Det)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}
