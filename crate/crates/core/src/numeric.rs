//! Numerical Schmidt decomposition of a sampled two-variable wave function.
//!
//! The integral equations
//!
//! ```text
//! int dy Psi(x, y) chi_n*(y) = sqrt(lambda_n) phi_n(x)
//! int dx Psi(x, y) phi_n*(x) = sqrt(lambda_n) chi_n(y)
//! ```
//!
//! are discretized on quadrature grids with weights `w_i`, `v_j`. With the
//! symmetrized kernel `M_ij = sqrt(w_i v_j) Psi(x_i, y_j)` they become an
//! ordinary SVD `M = U S V^H`, and
//!
//! ```text
//! sqrt(lambda_n) = s_n,  phi_n(x_i) = U_in / sqrt(w_i),  chi_n(y_j) = conj(V_jn) / sqrt(v_j)
//! ```
//!
//! so that `Psi_ij = sum_n sqrt(lambda_n) phi_n(x_i) chi_n(y_j)`.
//! Each mode pair is gauged so the largest-magnitude entry of `phi_n` is
//! real and positive.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::{schmidt_k, EntanglementReport, SchmidtSpectrum, Source};
use crate::error::{Error, Result};
use crate::hermite::{eval_psi_batch, turning_point, GridSpec, OscillatorIndex};
use crate::states::TwoModeState;

pub const DEFAULT_LAMBDA_FLOOR: f64 = 1e-14;

/// `Psi(x_i, y_j)` on a pair of grids.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionSample {
    pub grid_x: GridSpec,
    pub grid_y: GridSpec,
    /// `node_count_x x node_count_y`.
    pub values: DMatrix<Complex64>,
}

impl WaveFunctionSample {
    pub fn new(grid_x: GridSpec, grid_y: GridSpec, values: DMatrix<Complex64>) -> Result<Self> {
        if values.shape() != (grid_x.node_count(), grid_y.node_count()) {
            return Err(Error::GridMismatch(format!(
                "values are {:?}, grids have {} x {} nodes",
                values.shape(),
                grid_x.node_count(),
                grid_y.node_count()
            )));
        }
        Ok(WaveFunctionSample {
            grid_x,
            grid_y,
            values,
        })
    }

    /// `sum_ij w_i v_j |Psi_ij|^2`.
    pub fn norm_sqr(&self) -> f64 {
        weighted_sum_sqr(&self.grid_x, &self.grid_y, |i, j| self.values[(i, j)].norm_sqr())
    }

    /// Discrete L2 distance to another sample on the same grids.
    pub fn l2_distance(&self, other: &WaveFunctionSample) -> Result<f64> {
        if self.grid_x != other.grid_x || self.grid_y != other.grid_y {
            return Err(Error::GridMismatch("samples live on different grids".into()));
        }
        let d = weighted_sum_sqr(&self.grid_x, &self.grid_y, |i, j| {
            (self.values[(i, j)] - other.values[(i, j)]).norm_sqr()
        });
        Ok(d.sqrt())
    }
}

fn weighted_sum_sqr(gx: &GridSpec, gy: &GridSpec, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for (i, &wx) in gx.weights().iter().enumerate() {
        let row: f64 = gy.weights().iter().enumerate().map(|(j, &wy)| wy * f(i, j)).sum();
        total += wx * row;
    }
    total
}

/// Discrete Schmidt modes: column n of `modes_x` is `phi_n` at the x nodes,
/// column n of `modes_y` is `chi_n` at the y nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSchmidtModes {
    pub lambdas: Vec<f64>,
    pub modes_x: DMatrix<Complex64>,
    pub modes_y: DMatrix<Complex64>,
}

impl DiscretizedSchmidtModes {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }
}

fn ensure_covers(grid: &GridSpec, n_max: usize) -> Result<()> {
    let required = turning_point(OscillatorIndex::from(n_max));
    if required > grid.extent() {
        return Err(Error::GridTooNarrow {
            n_max,
            required,
            actual: grid.extent(),
        });
    }
    Ok(())
}

fn phase(theta: f64, photons: usize) -> Complex64 {
    Complex64::from_polar(1.0, photons as f64 * theta)
}

fn to_complex(m: DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(Complex64::from)
}

/// Samples `Psi(x, y)` including the propagation phase factors.
pub fn sample_wavefunction(
    state: &TwoModeState,
    grid_x: &GridSpec,
    grid_y: &GridSpec,
) -> Result<WaveFunctionSample> {
    let (nx, ny) = match state {
        TwoModeState::Product {
            a_coeffs, b_coeffs, ..
        } => (a_coeffs.len() - 1, b_coeffs.len() - 1),
        _ => (state.max_level(), state.max_level()),
    };
    ensure_covers(grid_x, nx)?;
    ensure_covers(grid_y, ny)?;
    let px = eval_psi_batch(OscillatorIndex::from(nx), grid_x);
    let py = eval_psi_batch(OscillatorIndex::from(ny), grid_y);

    let values = match state {
        TwoModeState::Product {
            a_coeffs,
            b_coeffs,
            theta,
        } => {
            let amp_a: Vec<_> = a_coeffs.iter().enumerate().map(|(n, a)| a * phase(*theta, n)).collect();
            let amp_b: Vec<_> = b_coeffs.iter().enumerate().map(|(n, b)| b * phase(*theta, n)).collect();
            let fx = to_complex(px.transpose()) * nalgebra::DVector::from_vec(amp_a);
            let fy = to_complex(py.transpose()) * nalgebra::DVector::from_vec(amp_b);
            &fx * fy.transpose()
        }
        TwoModeState::Stationary {
            total_photons,
            c_coeffs,
            theta,
        } => {
            let global = phase(*theta, *total_photons);
            let n_tot = *total_photons;
            // Rows of py reordered so row n holds psi_{N-n}(y).
            let py_rev = DMatrix::from_fn(n_tot + 1, grid_y.node_count(), |n, j| py[(n_tot - n, j)]);
            let mut xs = to_complex(px.transpose());
            for (n, c) in c_coeffs.iter().enumerate() {
                let f = c * global;
                xs.column_mut(n).iter_mut().for_each(|v| *v *= f);
            }
            xs * to_complex(py_rev)
        }
        TwoModeState::Diagonal { c_coeffs, theta } => {
            let mut xs = to_complex(px.transpose());
            for (n, c) in c_coeffs.iter().enumerate() {
                let f = c * phase(*theta, 2 * n);
                xs.column_mut(n).iter_mut().for_each(|v| *v *= f);
            }
            xs * to_complex(py)
        }
    };
    WaveFunctionSample::new(grid_x.clone(), grid_y.clone(), values)
}

/// SVD of the weighted kernel, keeping at most `rank_cut` terms with
/// `lambda > lambda_floor`.
pub fn numeric_schmidt(
    sample: &WaveFunctionSample,
    rank_cut: usize,
    lambda_floor: f64,
) -> Result<DiscretizedSchmidtModes> {
    let sx: Vec<f64> = sample.grid_x.weights().iter().map(|w| w.sqrt()).collect();
    let sy: Vec<f64> = sample.grid_y.weights().iter().map(|w| w.sqrt()).collect();
    let kernel = DMatrix::from_fn(sx.len(), sy.len(), |i, j| sample.values[(i, j)] * (sx[i] * sy[j]));

    let (u, singular, v) = svd(&kernel)?;
    let mut order: Vec<usize> = (0..singular.len()).collect();
    order.sort_by(|&a, &b| {
        singular[b]
            .partial_cmp(&singular[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&k| singular[k].powi(2) > lambda_floor)
        .take(rank_cut)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptySpectrum);
    }

    let rank = kept.len();
    let mut modes_x = DMatrix::zeros(sx.len(), rank);
    let mut modes_y = DMatrix::zeros(sy.len(), rank);
    let mut lambdas = Vec::with_capacity(rank);
    for (col, &k) in kept.iter().enumerate() {
        lambdas.push(singular[k].powi(2));
        for i in 0..sx.len() {
            modes_x[(i, col)] = u[(i, k)] / sx[i];
        }
        for j in 0..sy.len() {
            modes_y[(j, col)] = v[(j, k)].conj() / sy[j];
        }
        let peak = modes_x
            .column(col)
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best })
            .0;
        let z = modes_x[(peak, col)];
        let gauge = z.conj() / z.norm();
        modes_x.column_mut(col).iter_mut().for_each(|v| *v *= gauge);
        modes_y.column_mut(col).iter_mut().for_each(|v| *v *= gauge.conj());
        // Exact zero imaginary part on the gauge-fixing entry.
        modes_x[(peak, col)] = Complex64::from(modes_x[(peak, col)].norm());
    }
    Ok(DiscretizedSchmidtModes {
        lambdas,
        modes_x,
        modes_y,
    })
}

/// Full SVD `M = U diag(s) V^H`, checked against the Frobenius norm.
fn svd(kernel: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let (rows, cols) = kernel.shape();
    let m = faer::Mat::<Complex64>::from_fn(rows, cols, |i, j| kernel[(i, j)]);
    let dec = m
        .svd()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    let singular: Vec<f64> = (0..s.nrows()).map(|k| s[k].re).collect();
    let fro: f64 = kernel.iter().map(|z| z.norm_sqr()).sum();
    let captured: f64 = singular.iter().map(|x| x * x).sum();
    if !(captured - fro).abs().le(&(1e-10 * fro.max(f64::MIN_POSITIVE))) {
        return Err(Error::Decomposition(format!(
            "singular values capture {captured:e} of squared norm {fro:e}"
        )));
    }
    let u = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]);
    let v = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]);
    Ok((u, singular, v))
}

/// `Psi_ij = sum_n sqrt(lambda_n) phi_n(x_i) chi_n(y_j)`.
pub fn reconstruct(
    modes: &DiscretizedSchmidtModes,
    grid_x: &GridSpec,
    grid_y: &GridSpec,
) -> Result<WaveFunctionSample> {
    if modes.modes_x.nrows() != grid_x.node_count() || modes.modes_y.nrows() != grid_y.node_count() {
        return Err(Error::GridMismatch(format!(
            "modes sampled on {} x {} nodes, grids have {} x {}",
            modes.modes_x.nrows(),
            modes.modes_y.nrows(),
            grid_x.node_count(),
            grid_y.node_count()
        )));
    }
    let mut scaled = modes.modes_x.clone();
    for (n, l) in modes.lambdas.iter().enumerate() {
        let s = l.sqrt();
        scaled.column_mut(n).iter_mut().for_each(|v| *v *= s);
    }
    WaveFunctionSample::new(grid_x.clone(), grid_y.clone(), scaled * modes.modes_y.transpose())
}

/// K from the numeric spectrum after renormalizing it to unit sum.
pub fn k_numeric(modes: &DiscretizedSchmidtModes) -> Result<EntanglementReport> {
    let total: f64 = modes.lambdas.iter().sum();
    if modes.lambdas.is_empty() || total <= 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let entries = modes.lambdas.iter().enumerate().map(|(k, l)| (l / total, k)).collect();
    let spectrum = SchmidtSpectrum::new(entries, Source::Numeric)?;
    let mut report = schmidt_k(&spectrum)?;
    report.norm_residual = (total - 1.0).abs();
    Ok(report)
}

/// `<f, g>_w = sum_i w_i conj(f_i) g_i`.
pub fn weighted_inner(grid: &GridSpec, f: impl Iterator<Item = Complex64>, g: impl Iterator<Item = Complex64>) -> Complex64 {
    grid.weights().iter().zip(f.zip(g)).map(|(w, (a, b))| a.conj() * b * *w).sum()
}

/// `max |G - I|` over the weighted Gram matrix of the columns of `modes`.
pub fn gram_deviation(grid: &GridSpec, modes: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..modes.ncols() {
        for n in 0..modes.ncols() {
            let g = weighted_inner(grid, modes.column(m).iter().copied(), modes.column(n).iter().copied());
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/// `|<mode, psi_n>_w|` for one column of a mode matrix.
pub fn oscillator_fidelity(grid: &GridSpec, modes: &DMatrix<Complex64>, column: usize, n: usize) -> f64 {
    let psi = eval_psi_batch(OscillatorIndex::from(n), grid);
    weighted_inner(
        grid,
        modes.column(column).iter().copied(),
        psi.row(n).iter().map(|&v| Complex64::from(v)),
    )
    .norm()
}

/// Node count used when none is given: `2 n_max + 16`.
pub fn default_node_count(n_max: usize) -> usize {
    2 * n_max + 16
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{eval_psi, make_grid, GridKind};
    use crate::states::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn gh(n: usize) -> GridSpec {
        make_grid(GridKind::GaussHermite, n, None, OscillatorIndex::from(0)).unwrap()
    }

    fn vacuum() -> TwoModeState {
        make_product(vec![1.0.into()], vec![1.0.into()], 0.0, Normalization::Strict).unwrap()
    }

    fn max_qutrit() -> TwoModeState {
        let t = Complex64::from(1.0 / 3f64.sqrt());
        make_qutrit(t, t, t, 0.0, Normalization::Strict).unwrap()
    }

    #[test]
    fn single_photon_sample_matches_closed_form() {
        let alpha: f64 = 0.4;
        let g = GridSpec::from_parts(GridKind::Uniform, vec![-0.5, 0.5], vec![1.0, 1.0]).unwrap();
        // The uniform 2-node grid does not reach psi_1's turning point, so
        // sample on a covering grid that contains +-0.5 instead.
        assert!(matches!(
            sample_wavefunction(&make_single_photon(alpha, 0.0), &g, &g),
            Err(Error::GridTooNarrow { .. })
        ));
        let grid = GridSpec::from_parts(
            GridKind::Uniform,
            vec![-2.0, -0.5, 0.5, 2.0],
            vec![1.0; 4],
        )
        .unwrap();
        let s = sample_wavefunction(&make_single_photon(alpha, 0.0), &grid, &grid).unwrap();
        let (x, y) = (0.5, -0.5);
        // cos(a) psi_0(x) psi_1(y) + sin(a) psi_1(x) psi_0(y)
        let closed = (2.0 / PI).sqrt() * (-(x * x + y * y) / 2.0f64).exp() * (y * alpha.cos() + x * alpha.sin());
        assert_abs_diff_eq!(s.values[(2, 1)].re, closed, epsilon = 1e-15);
        assert_abs_diff_eq!(s.values[(2, 1)].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn printed_closed_form_has_half_norm() {
        // (1/sqrt(pi)) exp(-(x^2+y^2)/2)(x cos a + y sin a) drops the sqrt(2) of psi_1.
        let grid = gh(40);
        let alpha: f64 = 0.9;
        let f = |x: f64, y: f64| PI.sqrt().recip() * (-(x * x + y * y) / 2.0).exp() * (x * alpha.cos() + y * alpha.sin());
        let norm = grid.integrate(|x| grid.integrate(|y| f(x, y).powi(2)));
        assert_abs_diff_eq!(norm, 0.5, epsilon = 1e-12);
        let s = sample_wavefunction(&make_single_photon(alpha, 0.0), &grid, &grid).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_sample_is_gaussian() {
        let grid = gh(16);
        let s = sample_wavefunction(&vacuum(), &grid, &grid).unwrap();
        for (i, &x) in grid.nodes().iter().enumerate() {
            for (j, &y) in grid.nodes().iter().enumerate() {
                let expected = PI.sqrt().recip() * (-(x * x + y * y) / 2.0).exp();
                assert_abs_diff_eq!(s.values[(i, j)].re, expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn qutrit_at_origin_uses_even_terms_only() {
        let grid = make_grid(GridKind::Uniform, 21, None, OscillatorIndex::from(2)).unwrap();
        let s = sample_wavefunction(&max_qutrit(), &grid, &grid).unwrap();
        let t = 1.0 / 3f64.sqrt();
        let p = |n: usize| eval_psi(OscillatorIndex::from(n), 0.0);
        let expected = t * p(0) * p(2) + t * p(2) * p(0);
        assert_abs_diff_eq!(s.values[(10, 10)].re, expected, epsilon = 1e-15);
    }

    #[test]
    fn single_photon_spectrum() {
        let grid = gh(64);
        let s = sample_wavefunction(&make_single_photon(FRAC_PI_4, 0.0), &grid, &grid).unwrap();
        let modes = numeric_schmidt(&s, 64, DEFAULT_LAMBDA_FLOOR).unwrap();
        assert_eq!(modes.rank(), 2);
        assert_abs_diff_eq!(modes.lambdas[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(modes.lambdas[1], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(k_numeric(&modes).unwrap().k, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn vacuum_spectrum_and_reconstruction() {
        let grid = gh(20);
        let s = sample_wavefunction(&vacuum(), &grid, &grid).unwrap();
        let modes = numeric_schmidt(&s, 20, DEFAULT_LAMBDA_FLOOR).unwrap();
        assert_eq!(modes.rank(), 1);
        assert_abs_diff_eq!(modes.lambdas[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(k_numeric(&modes).unwrap().k, 1.0, epsilon = 1e-10);
        let back = reconstruct(&modes, &grid, &grid).unwrap();
        assert!(back.l2_distance(&s).unwrap() < 1e-12);
        // The single mode is psi_0, gauged positive.
        assert!(oscillator_fidelity(&grid, &modes.modes_x, 0, 0) > 1.0 - 1e-12);
        assert!(modes.modes_x.column(0).iter().all(|z| z.re > 0.0));
    }

    #[test]
    fn squeezed_spectrum_is_geometric() {
        let r: f64 = 0.5;
        let state = make_squeezed_vacuum(SqueezeParams::new(r, 0.0), 0.0).unwrap();
        let grid = gh(128);
        let s = sample_wavefunction(&state, &grid, &grid).unwrap();
        let modes = numeric_schmidt(&s, 128, DEFAULT_LAMBDA_FLOOR).unwrap();
        let TwoModeState::Diagonal { c_coeffs, .. } = &state else { unreachable!() };
        let total: f64 = (0..c_coeffs.len()).map(|n| r.tanh().powi(2 * n as i32)).sum::<f64>() / r.cosh().powi(2);
        for n in 0..10 {
            let expected = r.tanh().powi(2 * n as i32) / r.cosh().powi(2) / total;
            assert_abs_diff_eq!(modes.lambdas[n], expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn qutrit_and_squeezed_k() {
        let state = max_qutrit();
        let grid = gh(default_node_count(2));
        let modes = numeric_schmidt(&sample_wavefunction(&state, &grid, &grid).unwrap(), 100, DEFAULT_LAMBDA_FLOOR).unwrap();
        assert_abs_diff_eq!(k_numeric(&modes).unwrap().k, 3.0, epsilon = 1e-9);

        let sq = make_squeezed_vacuum(SqueezeParams::new(1.0, 0.0), 0.0).unwrap();
        let grid = gh(default_node_count(sq.max_level()));
        let modes = numeric_schmidt(&sample_wavefunction(&sq, &grid, &grid).unwrap(), 1000, DEFAULT_LAMBDA_FLOOR).unwrap();
        let k = k_numeric(&modes).unwrap();
        assert_abs_diff_eq!(k.k, 2f64.cosh(), epsilon = 1e-6);
        assert_eq!(k.source, Source::Numeric);
        assert!(gram_deviation(&grid, &modes.modes_x) < 1e-8);
        assert!(gram_deviation(&grid, &modes.modes_y) < 1e-8);
    }

    #[test]
    fn rank_one_truncation_follows_eckart_young() {
        let grid = gh(32);
        let s = sample_wavefunction(&make_single_photon(FRAC_PI_4, 0.0), &grid, &grid).unwrap();
        let modes = numeric_schmidt(&s, 1, DEFAULT_LAMBDA_FLOOR).unwrap();
        assert_eq!(modes.rank(), 1);
        let err = reconstruct(&modes, &grid, &grid).unwrap().l2_distance(&s).unwrap();
        assert_abs_diff_eq!(err, 0.5f64.sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn phase_parameters_do_not_change_k() {
        let grid = gh(default_node_count(4));
        let base = make_qutrit(
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.48),
            Complex64::new(0.64, 0.0),
            0.0,
            Normalization::Strict,
        )
        .unwrap();
        let k = |s: &TwoModeState| {
            k_numeric(&numeric_schmidt(&sample_wavefunction(s, &grid, &grid).unwrap(), 100, DEFAULT_LAMBDA_FLOOR).unwrap())
                .unwrap()
                .k
        };
        let k0 = k(&base);
        for theta in [0.3, 1.7, -2.2] {
            assert_abs_diff_eq!(k(&base.clone().with_theta(theta)), k0, epsilon = 1e-9);
        }
        let sq = |phi: f64, theta: f64| make_squeezed_vacuum(SqueezeParams { tail_epsilon: 1e-6, ..SqueezeParams::new(0.4, phi) }, theta).unwrap();
        let ks = k(&sq(0.0, 0.0));
        assert_abs_diff_eq!(k(&sq(1.1, 0.0)), ks, epsilon = 1e-9);
        assert_abs_diff_eq!(k(&sq(-0.4, 0.8)), ks, epsilon = 1e-9);
    }

    #[test]
    fn error_paths() {
        let grid = gh(8);
        let other = gh(9);
        let s = sample_wavefunction(&vacuum(), &grid, &grid).unwrap();
        let modes = numeric_schmidt(&s, 8, DEFAULT_LAMBDA_FLOOR).unwrap();
        assert!(matches!(reconstruct(&modes, &other, &grid), Err(Error::GridMismatch(_))));
        assert!(matches!(numeric_schmidt(&s, 8, 2.0), Err(Error::EmptySpectrum)));

        let empty = DiscretizedSchmidtModes {
            lambdas: vec![],
            modes_x: DMatrix::zeros(8, 0),
            modes_y: DMatrix::zeros(8, 0),
        };
        assert!(matches!(k_numeric(&empty), Err(Error::EmptySpectrum)));

        let narrow = make_grid(GridKind::Uniform, 11, Some(1.0), OscillatorIndex::from(0)).unwrap();
        let narrow = GridSpec::from_parts(
            GridKind::Uniform,
            narrow.nodes().iter().map(|x| x * 0.2).collect(),
            narrow.weights().to_vec(),
        )
        .unwrap();
        match sample_wavefunction(&max_qutrit(), &narrow, &narrow) {
            Err(Error::GridTooNarrow { required, n_max, .. }) => {
                assert_eq!(n_max, 2);
                assert_abs_diff_eq!(required, 5f64.sqrt(), epsilon = 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reconstruction_error_shrinks_with_refinement() {
        // On uniform grids the discretization itself carries error; the
        // rank-3 reconstruction residual against the Eckart-Young value
        // (sqrt of the discarded analytic tail) must not grow as nodes double.
        let state = make_squeezed_vacuum(SqueezeParams { tail_epsilon: 1e-10, ..SqueezeParams::new(0.5, 0.0) }, 0.0).unwrap();
        let lambdas = crate::analytic::analytic_spectrum(&state);
        let tail: f64 = lambdas.lambdas()[3..].iter().sum::<f64>().sqrt();
        let mut previous = f64::INFINITY;
        for nodes in [15, 30, 60] {
            let grid = make_grid(GridKind::Uniform, nodes, None, OscillatorIndex::from(state.max_level())).unwrap();
            let s = sample_wavefunction(&state, &grid, &grid).unwrap();
            let modes = numeric_schmidt(&s, 3, DEFAULT_LAMBDA_FLOOR).unwrap();
            let err = reconstruct(&modes, &grid, &grid).unwrap().l2_distance(&s).unwrap();
            let dev = (err - tail).abs();
            assert!(dev <= previous + 1e-12, "{nodes} nodes: {dev:e} > {previous:e}");
            previous = dev;
        }
        assert!(previous < 1e-8);
    }
}
