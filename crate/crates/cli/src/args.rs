use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qschmidt_core::{GridKind, NumericConfig, DEFAULT_LAMBDA_FLOOR};

#[derive(Parser, Debug)]
#[command(name = "qschmidt", version, about = "Schmidt decomposition and entanglement of two-mode photon states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analytic and numeric K for one state spec.
    ///
    /// JSON output: {"state", "analytic", "numeric", "grid", "k_difference", "k_polarization"}.
    /// CSV output: one row with columns k_analytic,k_numeric,k_difference,degree.
    Analyze {
        /// State spec (JSON object with a "kind" field).
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Run the numeric route (default).
        #[arg(long, overrides_with = "no_numeric")]
        numeric: bool,
        /// Analytic route only.
        #[arg(long, overrides_with = "numeric")]
        no_numeric: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and tabulate K.
    ///
    /// CSV columns: param,k_analytic,k_numeric,degree. `k_numeric` is empty
    /// unless --numeric is given; `degree` is k_analytic - 1.
    ///
    /// alpha: single photon at polarization angle alpha.
    /// r: squeezed vacuum with squeezing r and phase --phi.
    /// beta: polarization-basis rotation of --spec, or of a single photon
    /// at --alpha when no spec is given.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Number of rows, endpoints included.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Base state for a beta sweep (stationary kinds only).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Also compute K from the sampled wave function.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the Schmidt spectrum, |Psi|^2 and mode profiles as CSV.
    ///
    /// Files: lambdas.csv and lambdas_analytic.csv (rank,lambda,pairing),
    /// density.csv (x,y,value), mode_x_K.csv and mode_y_K.csv (coord,re,im).
    DumpModes {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Write at most this many mode profiles per side.
        #[arg(long)]
        modes: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Nodes per axis; defaults to 2 n_max + 16.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = GridArg::Gh)]
    pub grid_kind: GridArg,
    /// Squeezed-vacuum truncation tail when the spec has none.
    #[arg(long, default_value_t = 1e-12)]
    pub tail_epsilon: f64,
    /// Squared singular values at or below this are dropped.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FLOOR)]
    pub lambda_floor: f64,
    /// Keep at most this many Schmidt modes.
    #[arg(long)]
    pub rank_cut: Option<usize>,
}

impl RunArgs {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(n) = self.grid {
            if n < 2 {
                return Err(format!("--grid must be at least 2, got {n}"));
            }
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon.is_finite()) {
            return Err(format!("--tail-epsilon must be positive, got {}", self.tail_epsilon));
        }
        if !(self.lambda_floor > 0.0 && self.lambda_floor.is_finite()) {
            return Err(format!("--lambda-floor must be positive, got {}", self.lambda_floor));
        }
        if self.rank_cut == Some(0) {
            return Err("--rank-cut must be at least 1".into());
        }
        Ok(())
    }

    pub fn numeric_config(&self) -> NumericConfig {
        NumericConfig {
            grid_kind: self.grid_kind.into(),
            node_count: self.grid,
            rank_cut: self.rank_cut,
            lambda_floor: self.lambda_floor,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridArg {
    /// Gauss-Hermite nodes.
    Gh,
    /// Evenly spaced nodes with trapezoid weights.
    Uniform,
}

impl From<GridArg> for GridKind {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Gh => GridKind::GaussHermite,
            GridArg::Uniform => GridKind::Uniform,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    R,
    Beta,
}
