use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qcap",
    version,
    about = "Capability regions of noisy, mitigated and error-corrected quantum computers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic frontier for one or more error-rate sets.
    Frontier(FrontierArgs),
    /// Monte Carlo mirror-circuit benchmark on a (width, depth) grid.
    Benchmark(BenchmarkArgs),
    /// Unmitigated region plus one mitigated region per shot budget.
    Mitigate(MitigateArgs),
    /// Surface-code regions per physical-qubit budget, or a resource plan.
    Qec(QecArgs),
    /// Four-panel capability atlas and a combined table.
    Atlas(AtlasArgs),
    /// Parse a scenario and print its resolved form.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
    Both,
}

/// Flags shared by every subcommand. Each maps onto one scenario key and
/// wins over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Scenario file; relative paths missing from the working directory are
    /// looked up under $QCAP_SCENARIO_DIR.
    #[arg(short = 's', long)]
    pub scenario: Option<PathBuf>,

    /// Output directory (output.dir).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Artifacts to write (output.formats).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,

    /// Output file stem (output.stem).
    #[arg(long)]
    pub stem: Option<String>,

    /// Print only a JSON summary on stdout.
    #[arg(short, long, conflicts_with = "verbose")]
    pub quiet: bool,

    #[arg(short, long)]
    pub verbose: bool,

    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Uniform per-gate error rate, setting rates.eps_1q and rates.eps_2q.
    /// Repeat for several rate sets.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Vec<f64>,

    #[arg(long = "eps-2q", allow_negative_numbers = true)]
    pub eps_2q: Option<f64>,

    #[arg(long = "eps-meas", allow_negative_numbers = true)]
    pub eps_meas: Option<f64>,

    /// Fraction of qubits in two-qubit gates per layer (rates.zeta).
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: Option<f64>,

    /// Success threshold (analysis.threshold).
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,

    #[arg(long = "width-max")]
    pub width_max: Option<u64>,

    #[arg(long = "depth-max")]
    pub depth_max: Option<u64>,

    /// Count readout errors (analysis.include_measurement).
    #[arg(long = "include-measurement", value_name = "BOOL")]
    pub include_measurement: Option<bool>,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BenchFlags {
    #[arg(long)]
    pub shots: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long = "n-circuits")]
    pub n_circuits: Option<u64>,

    /// Comma-separated benchmark widths.
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<u64>>,

    /// Deepest benchmark depth (benchmark.depth_max).
    #[arg(long = "bench-depth-max")]
    pub bench_depth_max: Option<u64>,

    /// Lift the default run-size cap.
    #[arg(long = "allow-long")]
    pub allow_long: bool,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub bench: BenchFlags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MitigationFlags {
    /// Total shot budget; repeat for several regions.
    #[arg(long)]
    pub budget: Vec<u64>,

    #[arg(long = "overhead-exponent")]
    pub overhead_exponent: Option<f64>,

    #[arg(long = "base-shots")]
    pub base_shots: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MitigateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub mitigation: MitigationFlags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QecFlags {
    /// Physical-qubit budget; repeat for several regions.
    #[arg(long = "physical-qubits")]
    pub physical_qubits: Vec<u64>,

    /// Physical error rate (qec.p).
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,

    #[arg(long = "p-th")]
    pub p_th: Option<f64>,

    #[arg(long)]
    pub prefactor: Option<f64>,

    #[arg(long = "qubits-per-logical-factor")]
    pub qubits_per_logical_factor: Option<u64>,

    #[arg(long = "distances-max")]
    pub distances_max: Option<u64>,

    #[arg(long = "cycle-time")]
    pub cycle_time: Option<f64>,
}

#[derive(Debug, Args)]
pub struct QecArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub qec: QecFlags,

    /// Plan mode: logical width of the target program.
    #[arg(long = "target-width", requires = "target_depth")]
    pub target_width: Option<u64>,

    /// Plan mode: logical depth of the target program.
    #[arg(long = "target-depth", requires = "target_width")]
    pub target_depth: Option<u64>,

    /// Scan code parameters for the target program (default 10^4 x 10^8)
    /// against the largest physical-qubit budget.
    #[arg(long)]
    pub sensitivity: bool,
}

#[derive(Debug, Args)]
pub struct AtlasArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub bench: BenchFlags,
    #[command(flatten)]
    pub mitigation: MitigationFlags,
    #[command(flatten)]
    pub qec: QecFlags,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub bench: BenchFlags,
    #[command(flatten)]
    pub mitigation: MitigationFlags,
    #[command(flatten)]
    pub qec: QecFlags,
}
