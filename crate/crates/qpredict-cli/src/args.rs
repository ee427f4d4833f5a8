//! Command-line interface definition.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qpredict",
    version,
    about = "Quantum prediction engine: dice tables, EPR trials, Bell tests, measurement reports, lattice checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

/// Global run configuration shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunConfig {
    /// Seed for the deterministic generator; identical seeds give
    /// byte-identical output.
    #[arg(long, global = true, default_value_t = 12345)]
    pub seed: u64,

    /// Number of sampled trials (or series repetitions).
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output path; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 12-throw dice table: exact probabilities of n 'four's next to
    /// sampled relative frequencies.
    Dice(DiceArgs),
    /// Singlet trials over a grid of settings: counts, marginals,
    /// correlations, post-selected conditionals, no-signaling deltas.
    Epr(EprArgs),
    /// CHSH report: exact and sampled S against the classical and quantum
    /// bounds.
    Bell(BellArgs),
    /// Measurement chain for one state and observable: outcome
    /// distribution, von Neumann mixture, interference norms, and the
    /// pre-measurement comparison.
    Measure(MeasureArgs),
    /// Orthocomplemented-lattice axiom checks on random subspaces, the
    /// distributivity counterexample, and the classical contrast.
    Lattice(LatticeArgs),
}

#[derive(Debug, Args)]
pub struct DiceArgs {
    /// Skip the sampled-frequency column (exact table only).
    #[arg(long)]
    pub exact_only: bool,
}

#[derive(Debug, Args)]
pub struct EprArgs {
    /// Alice's planar setting angles in radians, comma-separated.
    #[arg(long, default_value = "0,1.5707963267948966")]
    pub alice_angles: String,

    /// Bob's planar setting angles in radians, comma-separated.
    #[arg(long, default_value = "0.7853981633974483,2.356194490192345")]
    pub bob_angles: String,

    /// Also write the raw per-trial log (CSV) to this path.
    #[arg(long)]
    pub log_out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    /// Alice's first planar angle (radians).
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,

    /// Alice's second planar angle (radians).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub a2: f64,

    /// Bob's first planar angle (radians).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub b: f64,

    /// Bob's second planar angle (radians).
    #[arg(long, default_value_t = 3.0 * std::f64::consts::FRAC_PI_4)]
    pub b2: f64,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// State as JSON (`{"amplitudes": [[re, im], …]}`), inline or a file
    /// path. Defaults to the equal superposition of a qubit.
    #[arg(long)]
    pub state: Option<String>,

    /// Observable as JSON (`{"matrix": [[[re, im], …], …]}`, row-major),
    /// inline or a file path. Defaults to Pauli-z.
    #[arg(long)]
    pub observable: Option<String>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Ambient dimension (at least 2).
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Number of random subspaces to run the axioms on.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
}
