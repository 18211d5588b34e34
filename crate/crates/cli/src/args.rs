use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unruh_core::analysis::{KinkMeasure, Quantity, SweepVariable, DEFAULT_TOL_Q};
use unruh_core::correlations::OptimizerSettings;

/// Correlations of a qubit pair when one qubit's detector is uniformly accelerated.
///
/// Numbers go to standard output (JSON or CSV); diagnostics go to standard error.
/// Exit codes: 0 success, 2 usage, 3 numeric failure, 4 I/O, 5 no sudden change.
#[derive(Debug, Parser)]
#[command(name = "unruh", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default: csv for `sweep`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub output: Option<Format>,

    /// Write to this file instead of standard output. Relative paths are
    /// resolved against $UNRUH_OUTPUT_DIR when it is set.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Read `key = value` lines and apply them as flags; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the two-qubit density matrix.
    State(ParamArgs),
    /// Every correlation quantifier for one parameter point.
    Correlations(ParamArgs),
    /// Sample quantities on a 1-D or 2-D grid.
    Sweep(SweepArgs),
    /// Locate the sudden change of correlations in q.
    SuddenChange(SuddenChangeArgs),
    /// q at which entanglement dies.
    SuddenDeath(SuddenDeathArgs),
    /// Fit ln q_sc = a + b nu2 + c nu2^2 to solved sudden-change points.
    Fit(FitArgs),
    /// Acceleration, local temperature and q of a static detector near a black hole.
    Blackhole(BlackholeArgs),
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Seed for the optimiser's random restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coarse grid points per measurement angle.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Simplex convergence threshold on the objective.
    #[arg(long, global = true)]
    pub refine_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Local refinements per optimisation.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
}

impl OptimizerArgs {
    pub fn settings(&self) -> OptimizerSettings {
        let d = OptimizerSettings::default();
        OptimizerSettings {
            coarse_grid_per_angle: self.grid.unwrap_or(d.coarse_grid_per_angle),
            refine_tol: self.refine_tol.unwrap_or(d.refine_tol),
            max_refine_iters: self.max_iters.unwrap_or(d.max_refine_iters),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed,
        }
    }
}

/// Model parameters, given directly or derived from detector parameters.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Parametrized acceleration exp(-2 pi Omega / a), in [0, 1].
    #[arg(long, default_value_t = 0.0, conflicts_with = "physical")]
    pub q: f64,
    /// Effective coupling nu^2 >= 0.
    #[arg(long, default_value_t = 0.4 * PI, conflicts_with = "physical")]
    pub nu2: f64,
    /// Amplitude of |0_A 1_R> in the initial state.
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha: f64,

    /// Derive q and nu2 from --omega, --accel, --eps, --delta and --kappa.
    #[arg(long)]
    pub physical: bool,
    /// Detector energy gap.
    #[arg(long, requires = "physical")]
    pub omega: Option<f64>,
    /// Proper acceleration.
    #[arg(long, requires = "physical")]
    pub accel: Option<f64>,
    /// Coupling amplitude.
    #[arg(long, requires = "physical")]
    pub eps: Option<f64>,
    /// Interaction time.
    #[arg(long, requires = "physical")]
    pub delta: Option<f64>,
    /// Detector size (default 0, a point detector).
    #[arg(long, requires = "physical")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept variable: q, nu2 or alpha.
    #[arg(long, default_value = "q")]
    pub var: SweepVariable,
    /// Lower end (default: 0).
    #[arg(long)]
    pub lo: Option<f64>,
    /// Upper end (default: 0.999 for q, 4 for nu2, 1 for alpha).
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,

    /// Inner variable of a 2-D grid; rows come out in long format.
    #[arg(long)]
    pub var2: Option<SweepVariable>,
    #[arg(long, requires = "var2")]
    pub lo2: Option<f64>,
    #[arg(long, requires = "var2")]
    pub hi2: Option<f64>,
    #[arg(long, default_value_t = 41)]
    pub points2: usize,

    /// Comma-separated list of I, K, Q, D_A, D_R, C, concurrence, negativity.
    #[arg(long, value_delimiter = ',', default_value = "I,K,Q")]
    pub quantities: Vec<Quantity>,

    /// Values of the variables that are not swept.
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Bisection on the discord branch equation (alpha = 1/sqrt 2 only).
    ClosedForm,
    /// Non-smooth point of a numerically optimised curve.
    Kink,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Kink => "kink",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    TwoSide,
    DiscordA,
    DiscordR,
}

impl From<MeasureArg> for KinkMeasure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::TwoSide => KinkMeasure::TwoSide,
            MeasureArg::DiscordA => KinkMeasure::DiscordA,
            MeasureArg::DiscordR => KinkMeasure::DiscordR,
        }
    }
}

#[derive(Debug, Args)]
pub struct SuddenChangeArgs {
    #[arg(long)]
    pub nu2: f64,
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: Method,
    /// Tolerance in q (default 1e-9 closed-form, 1e-7 kink).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Kink method: curve to inspect.
    #[arg(long, value_enum, default_value = "two-side")]
    pub measure: MeasureArg,
    /// Kink method: uniform q grid size.
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
}

impl SuddenChangeArgs {
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(match self.method {
            Method::ClosedForm => DEFAULT_TOL_Q,
            Method::Kink => 1e-7,
        })
    }
}

#[derive(Debug, Args)]
pub struct SuddenDeathArgs {
    #[arg(long)]
    pub nu2: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Coupling range of the solved points.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 2.5])]
    pub range: Vec<f64>,
    #[arg(long, default_value_t = 25)]
    pub points: usize,
    /// Root tolerance in q for each point.
    #[arg(long, default_value_t = DEFAULT_TOL_Q)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BlackholeArgs {
    #[arg(long)]
    pub mass: f64,
    /// Schwarzschild radial coordinate of the static detector.
    #[arg(long)]
    pub radius: f64,
    /// Detector energy gap.
    #[arg(long)]
    pub omega: f64,
}
