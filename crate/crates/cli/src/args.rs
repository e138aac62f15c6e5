//! Flag definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zeromode",
    version,
    about = "Vacuum correlators and stress tensor on the (1+1) time machine and the Einstein cylinder",
    args_override_self = true
)]
pub struct Cli {
    /// Read additional flags from a file of `key=value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate C+, C- and W for point pairs.
    Correlator(CorrelatorArgs),
    /// Compare the time machine with the cylinder over a range of warps.
    LimitScan(LimitScanArgs),
    /// Stress tensor components.
    Rset(RsetArgs),
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
}

/// Warp given either as `A` or as `delta = A - 1`.
#[derive(Debug, Clone, Args)]
#[group(id = "warp", required = true, multiple = false)]
pub struct WarpArgs {
    /// Warp factor A >= 1.
    #[arg(long = "A", value_name = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// delta = A - 1 >= 0.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Largest number of series terms.
    #[arg(long, default_value_t = 10_000)]
    pub n_max: usize,
    /// Bound on the discarded series remainder.
    #[arg(long, default_value_t = 1e-14)]
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartArg {
    Ty,
    Poincare,
    Null,
    Compact,
    Adapted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Series,
    Closed,
}

#[derive(Debug, Args)]
pub struct CorrelatorArgs {
    #[command(flatten)]
    pub warp: WarpArgs,
    /// Identification length L.
    #[arg(long = "L", value_name = "L", default_value_t = 1.0)]
    pub length: f64,
    /// A point pair `x1,x2;x1',x2'` (repeatable).
    #[arg(long = "pair", value_name = "PAIR", allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    /// Grid for the first point, `lo:hi:n,lo:hi:n`, paired with `--ref`.
    #[arg(long, value_name = "GRID", requires = "reference", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Second point `x1',x2'` for `--grid`.
    #[arg(long = "ref", id = "reference", value_name = "POINT", allow_hyphen_values = true)]
    pub reference: Option<String>,
    /// Chart of the coordinates.
    #[arg(long, value_enum, default_value_t = ChartArg::Null)]
    pub chart: ChartArg,
    #[arg(long, value_enum, default_value_t = FormArg::Series)]
    pub form: FormArg,
    /// Zero-mode frequency parameter, used only when A = 1.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitScanArgs {
    /// Log-spaced warps `lo:hi:n`.
    #[arg(long, value_name = "RANGE", allow_hyphen_values = true)]
    pub delta_log: String,
    /// Cylinder pair `t,y;t',y'` (repeatable).
    #[arg(long = "pair-ty", value_name = "PAIR", required = true, allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    #[arg(long = "L", value_name = "L", default_value_t = 1.0)]
    pub length: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RsetChartArg {
    /// Poincaré null coordinates at a null point.
    Zeta,
    /// Cylinder null coordinates at a TY point (weak warp only).
    Z,
    /// Einstein cylinder with a zero-mode state; needs `--gamma`.
    Cylinder,
}

#[derive(Debug, Args)]
pub struct RsetArgs {
    #[command(flatten)]
    pub warp: WarpArgs,
    #[arg(long = "L", value_name = "L", default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, value_enum, default_value_t = RsetChartArg::Z)]
    pub chart: RsetChartArg,
    /// Evaluation point `x1,x2` (repeatable); defaults to the chart origin.
    #[arg(long = "point", value_name = "POINT", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Zero-mode frequency parameter for `--chart cylinder`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Geometry,
    Modes,
    Correlators,
    Rset,
    Boundary,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Warp factors for the series/closed-form comparison (repeatable).
    #[arg(long = "A", value_name = "A")]
    pub warps: Vec<f64>,
    /// Random pairs per sampled comparison.
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 20_240_917)]
    pub seed: u64,
    /// Write the JSON report here as well as to standard output.
    #[arg(long, short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}
