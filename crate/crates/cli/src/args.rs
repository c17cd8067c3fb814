use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "betheprep",
    version,
    about = "Prepare, simulate and cost Bethe-ansatz eigenstates of the XXZ chain"
)]
pub struct Cli {
    /// Worker threads for independent points (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Bethe equations for one quantum-number set or all of them.
    Solve(SolveArgs),
    /// Emit the preparation circuit for one solution.
    Build(BuildArgs),
    /// Build, simulate and post-select; compare against the exact state.
    Run(RunArgs),
    /// Run every enumerated solution for each J_z in a list.
    Sweep(SweepArgs),
    /// Gate, qubit and T counts over an (L, M) grid without simulation.
    Estimate(EstimateArgs),
    /// Resource counts plus alternative-method costs over an (L, M) grid.
    Compare(EstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    CircuitText,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reflection {
    Tree,
    Mcx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repetitions {
    /// M! runs, the worst-case inverse success probability.
    WorstCase,
    /// ceil(sqrt(M!)) runs with amplitude amplification.
    Amplified,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of sites.
    #[arg(long = "L")]
    pub l: Option<usize>,

    /// Number of down spins.
    #[arg(long = "M")]
    pub m: Option<usize>,

    /// Transverse coupling J_xy.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub jxy: f64,

    /// Longitudinal coupling J_z.
    #[arg(long, allow_hyphen_values = true)]
    pub jz: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    /// Comma-separated quantum numbers, e.g. "-3/2,1/2".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "enumerate")]
    pub quantum_numbers: Option<String>,

    /// Use every distinct converged solution.
    #[arg(long)]
    pub enumerate: bool,

    /// Read solutions written by `solve --format json` instead.
    #[arg(long, conflicts_with_all = ["quantum_numbers", "enumerate"])]
    pub solution: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    /// Amplitude amplification rounds.
    #[arg(long, default_value_t = 0)]
    pub amplify: usize,

    /// Skip faucet gates that cannot act near the chain ends.
    #[arg(long)]
    pub edge_skip: bool,

    /// Reflection construction used by amplification.
    #[arg(long, value_enum, default_value_t = Reflection::Tree)]
    pub reflection: Reflection,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Seed for measurement sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Largest simulated register, in qubits.
    #[arg(long, default_value_t = 26)]
    pub cap: usize,

    /// Sample this many label measurements from the final state.
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated quantum numbers, e.g. "-3/2,1/2".
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "enumerate",
        required_unless_present = "enumerate"
    )]
    pub quantum_numbers: Option<String>,
    /// Solve every parity-correct set in (-L/2, L/2].
    #[arg(long)]
    pub enumerate: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub jxy: f64,
    /// Comma-separated J_z values, e.g. "-0.5,0.5".
    #[arg(long, allow_hyphen_values = true)]
    pub jz: String,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Sites: a value, a list "10,20" or a range "40..100:10".
    #[arg(long = "L")]
    pub l: String,
    /// Down spins, same syntax as --L.
    #[arg(long = "M")]
    pub m: String,
    /// Rotation synthesis precision.
    #[arg(long, default_value_t = 1e-10)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Repetitions::WorstCase)]
    pub repetitions: Repetitions,
    /// Use 1/p repetitions for a measured success probability instead.
    #[arg(long, conflicts_with = "repetitions")]
    pub success_probability: Option<f64>,
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
