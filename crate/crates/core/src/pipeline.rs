//! Analytic and numeric routes bundled for callers that want both.

use crate::analytic::{analytic_report, EntanglementReport};
use crate::error::Result;
use crate::hermite::{make_grid, GridKind, GridSpec, OscillatorIndex};
use crate::numeric::{
    default_node_count, k_numeric, numeric_schmidt, sample_wavefunction, DiscretizedSchmidtModes,
    WaveFunctionSample, DEFAULT_LAMBDA_FLOOR,
};
use crate::states::TwoModeState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig {
    pub grid_kind: GridKind,
    /// Defaults to `2 n_max + 16`.
    pub node_count: Option<usize>,
    /// Defaults to keeping every retained singular value.
    pub rank_cut: Option<usize>,
    pub lambda_floor: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            grid_kind: GridKind::GaussHermite,
            node_count: None,
            rank_cut: None,
            lambda_floor: DEFAULT_LAMBDA_FLOOR,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NumericRun {
    pub grid: GridSpec,
    pub sample: WaveFunctionSample,
    pub modes: DiscretizedSchmidtModes,
    pub report: EntanglementReport,
}

/// Samples `state` on a square grid, decomposes it and computes K.
pub fn run_numeric(state: &TwoModeState, config: &NumericConfig) -> Result<NumericRun> {
    let n_max = state.max_level();
    let nodes = config.node_count.unwrap_or_else(|| default_node_count(n_max));
    let grid = make_grid(config.grid_kind, nodes, None, OscillatorIndex::from(n_max))?;
    let sample = sample_wavefunction(state, &grid, &grid)?;
    let modes = numeric_schmidt(&sample, config.rank_cut.unwrap_or(nodes), config.lambda_floor)?;
    let report = k_numeric(&modes)?;
    Ok(NumericRun {
        grid,
        sample,
        modes,
        report,
    })
}

/// Analytic report plus, optionally, the numeric one.
pub fn analyze(
    state: &TwoModeState,
    numeric: Option<&NumericConfig>,
) -> Result<(EntanglementReport, Option<NumericRun>)> {
    let analytic = analytic_report(state);
    let numeric = numeric.map(|cfg| run_numeric(state, cfg)).transpose()?;
    Ok((analytic, numeric))
}
