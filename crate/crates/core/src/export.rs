//! CSV plot data: `|Psi(x, y)|^2`, Schmidt coefficients and mode profiles.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::SchmidtSpectrum;
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::hermite::GridSpec;
use crate::numeric::WaveFunctionSample;

/// Rows `x,y,value` with `value = |Psi(x, y)|^2`.
pub fn write_density_csv<W: Write>(out: W, sample: &WaveFunctionSample) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "value"])?;
    for (i, &x) in sample.grid_x.nodes().iter().enumerate() {
        for (j, &y) in sample.grid_y.nodes().iter().enumerate() {
            w.write_record([fmt_f64(x), fmt_f64(y), fmt_f64(sample.values[(i, j)].norm_sqr())])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rows `rank,lambda,pairing`.
pub fn write_lambdas_csv<W: Write>(out: W, spectrum: &SchmidtSpectrum) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank", "lambda", "pairing"])?;
    for (k, (l, p)) in spectrum.lambdas().iter().zip(spectrum.pairing()).enumerate() {
        w.write_record([k.to_string(), fmt_f64(*l), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `coord,re,im` for one column of a mode matrix.
pub fn write_mode_csv<W: Write>(out: W, grid: &GridSpec, modes: &DMatrix<Complex64>, column: usize) -> Result<()> {
    if modes.nrows() != grid.node_count() || column >= modes.ncols() {
        return Err(Error::GridMismatch(format!(
            "mode matrix is {:?}, asked for column {column} on {} nodes",
            modes.shape(),
            grid.node_count()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["coord", "re", "im"])?;
    for (i, &x) in grid.nodes().iter().enumerate() {
        let z = modes[(i, column)];
        w.write_record([fmt_f64(x), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}
