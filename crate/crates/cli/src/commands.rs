use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qschmidt_core::export::{write_density_csv, write_lambdas_csv, write_mode_csv};
use qschmidt_core::format::{fmt_f64, to_json_string};
use qschmidt_core::{
    analytic_report, analyze, k_qutrit_polarization, make_single_photon, make_squeezed_vacuum, rotate_basis,
    run_numeric, EntanglementReport, GridKind, GridSpec, NumericConfig, SqueezeParams, StateSpec, TwoModeState,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, RunArgs, SweepParam};
use crate::failure::Failure;

/// Relative slack on `1 <= K <= #terms` for rounding in `1 / sum lambda^2`.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Serialize)]
struct GridInfo {
    kind: &'static str,
    node_count: usize,
    extent: f64,
}

impl GridInfo {
    fn of(grid: &GridSpec) -> Self {
        GridInfo {
            kind: match grid.kind() {
                GridKind::GaussHermite => "gh",
                GridKind::Uniform => "uniform",
            },
            node_count: grid.node_count(),
            extent: grid.extent(),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    state: &'static str,
    analytic: &'a EntanglementReport,
    numeric: Option<&'a EntanglementReport>,
    grid: Option<GridInfo>,
    k_difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_polarization: Option<f64>,
}

fn load_spec(path: &Path) -> Result<StateSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    StateSpec::from_json(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path, run: &RunArgs) -> Result<(StateSpec, TwoModeState), Failure> {
    let spec = load_spec(path)?;
    let state = spec.build(run.tail_epsilon).map_err(Failure::from_state)?;
    Ok((spec, state))
}

fn check_bounds(report: &EntanglementReport) -> Result<(), Failure> {
    if report.within_bounds(BOUND_SLACK) {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "{:?} K = {} outside [1, {}]",
            report.source,
            report.k,
            report.spectrum.nonzero_count()
        )))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::output(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Failure::output)
        }
    }
}

pub fn cmd_analyze(
    spec_path: &Path,
    run: &RunArgs,
    numeric: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    run.validate().map_err(Failure::Parse)?;
    let (spec, state) = load_state(spec_path, run)?;
    let cfg = run.numeric_config();
    let (analytic, numeric_run) = analyze(&state, numeric.then_some(&cfg)).map_err(Failure::from_numeric)?;
    check_bounds(&analytic)?;
    if let Some(n) = &numeric_run {
        check_bounds(&n.report)?;
    }
    let k_numeric = numeric_run.as_ref().map(|n| n.report.k);
    let k_difference = k_numeric.map(|k| k - analytic.k);

    let text = match format {
        Format::Json => {
            let k_polarization = spec
                .qutrit_coefficients()
                .map(|[c1, c2, c3]| k_qutrit_polarization(c1, c2, c3))
                .transpose()
                .map_err(Failure::from_numeric)?;
            let report = AnalyzeReport {
                state: state.kind_name(),
                analytic: &analytic,
                numeric: numeric_run.as_ref().map(|n| &n.report),
                grid: numeric_run.as_ref().map(|n| GridInfo::of(&n.grid)),
                k_difference,
                k_polarization,
            };
            to_json_string(&report).map_err(Failure::output)?
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k_analytic", "k_numeric", "k_difference", "degree"])
                .and_then(|_| {
                    w.write_record([fmt_f64(analytic.k), opt(k_numeric), opt(k_difference), fmt_f64(analytic.degree)])
                })
                .map_err(Failure::output)?;
            csv_text(w)?
        }
    };
    emit(out, &text)
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(Failure::output)?;
    String::from_utf8(bytes).map_err(Failure::output)
}

/// `steps` evenly spaced values with both endpoints exact.
fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    let last = steps - 1;
    (0..steps)
        .map(|k| if k == last { to } else { from + (to - from) * (k as f64 / last as f64) })
        .collect()
}

pub struct SweepRequest {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub alpha: f64,
    pub phi: f64,
    pub theta: f64,
    pub spec: Option<PathBuf>,
    pub numeric: bool,
}

struct SweepRow {
    value: f64,
    k_analytic: f64,
    k_numeric: Option<f64>,
    degree: f64,
}

fn sweep_state(req: &SweepRequest, base: Option<&TwoModeState>, run: &RunArgs, v: f64) -> Result<TwoModeState, Failure> {
    match req.param {
        SweepParam::Alpha => Ok(make_single_photon(v, req.theta)),
        SweepParam::R => {
            let params = SqueezeParams {
                tail_epsilon: run.tail_epsilon,
                ..SqueezeParams::new(v, req.phi)
            };
            make_squeezed_vacuum(params, req.theta).map_err(Failure::from_state)
        }
        SweepParam::Beta => {
            let base = base.expect("beta sweeps carry a base state");
            rotate_basis(base, v).map_err(Failure::from_state)
        }
    }
}

fn sweep_row(state: &TwoModeState, value: f64, numeric: Option<&NumericConfig>) -> Result<SweepRow, Failure> {
    let analytic = analytic_report(state);
    check_bounds(&analytic)?;
    let k_numeric = match numeric {
        Some(cfg) => {
            let run = run_numeric(state, cfg).map_err(Failure::from_numeric)?;
            check_bounds(&run.report)?;
            Some(run.report.k)
        }
        None => None,
    };
    Ok(SweepRow {
        value,
        k_analytic: analytic.k,
        k_numeric,
        degree: analytic.degree,
    })
}

pub fn cmd_sweep(req: &SweepRequest, run: &RunArgs, out: Option<&Path>) -> Result<(), Failure> {
    run.validate().map_err(Failure::Parse)?;
    if req.steps < 2 {
        return Err(Failure::Parse(format!("--steps must be at least 2, got {}", req.steps)));
    }
    if !(req.from.is_finite() && req.to.is_finite() && req.from < req.to) {
        return Err(Failure::Parse(format!("need finite --from < --to, got {} and {}", req.from, req.to)));
    }
    if req.param == SweepParam::R && req.from < 0.0 {
        return Err(Failure::Parse(format!("squeezing r must be non-negative, got {}", req.from)));
    }
    let base = match (req.param, &req.spec) {
        (SweepParam::Beta, Some(path)) => Some(load_state(path, run)?.1),
        (SweepParam::Beta, None) => Some(make_single_photon(req.alpha, req.theta)),
        _ => None,
    };
    let cfg = run.numeric_config();
    let numeric = req.numeric.then_some(&cfg);

    let rows: Vec<SweepRow> = linspace(req.from, req.to, req.steps)
        .into_par_iter()
        .map(|v| sweep_state(req, base.as_ref(), run, v).and_then(|s| sweep_row(&s, v, numeric)))
        .collect::<Result<_, _>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["param", "k_analytic", "k_numeric", "degree"])
        .map_err(Failure::output)?;
    for row in &rows {
        w.write_record([
            fmt_f64(row.value),
            fmt_f64(row.k_analytic),
            row.k_numeric.map(fmt_f64).unwrap_or_default(),
            fmt_f64(row.degree),
        ])
        .map_err(Failure::output)?;
    }
    emit(out, &csv_text(w)?)
}

fn create(dir: &Path, name: &str) -> Result<fs::File, Failure> {
    let path = dir.join(name);
    fs::File::create(&path).map_err(|e| Failure::output(format!("{}: {e}", path.display())))
}

pub fn cmd_dump_modes(spec_path: &Path, run: &RunArgs, out_dir: &Path, max_modes: Option<usize>) -> Result<(), Failure> {
    run.validate().map_err(Failure::Parse)?;
    let (_, state) = load_state(spec_path, run)?;
    let analytic = analytic_report(&state);
    check_bounds(&analytic)?;
    let num = run_numeric(&state, &run.numeric_config()).map_err(Failure::from_numeric)?;
    check_bounds(&num.report)?;

    fs::create_dir_all(out_dir).map_err(|e| Failure::output(format!("{}: {e}", out_dir.display())))?;
    let io = |e: qschmidt_core::Error| Failure::output(e);
    write_lambdas_csv(create(out_dir, "lambdas.csv")?, &num.report.spectrum).map_err(io)?;
    write_lambdas_csv(create(out_dir, "lambdas_analytic.csv")?, &analytic.spectrum).map_err(io)?;
    write_density_csv(create(out_dir, "density.csv")?, &num.sample).map_err(io)?;
    let count = max_modes.map_or(num.modes.rank(), |m| m.min(num.modes.rank()));
    for k in 0..count {
        write_mode_csv(create(out_dir, &format!("mode_x_{k}.csv"))?, &num.grid, &num.modes.modes_x, k).map_err(io)?;
        write_mode_csv(create(out_dir, &format!("mode_y_{k}.csv"))?, &num.grid, &num.modes.modes_y, k).map_err(io)?;
    }
    Ok(())
}
