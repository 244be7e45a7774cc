//! Harmonic-oscillator eigenfunctions and the 1D quadrature grids used to
//! sample and integrate them.
//!
//! `psi_n(x) = (2^n n! sqrt(pi))^(-1/2) exp(-x^2/2) H_n(x)` is never formed
//! from `H_n` and `n!` directly. Instead the normalized three-term recurrence
//!
//! ```text
//! psi_{k+1}(x) = x sqrt(2/(k+1)) psi_k(x) - sqrt(k/(k+1)) psi_{k-1}(x)
//! ```
//!
//! is run on the polynomial part `psi_k(x) exp(x^2/2)`, with exact power-of-two
//! rescaling when it grows large, and the Gaussian factor is attached at the
//! end. This keeps every level finite far beyond n = 200 and far out into the
//! tails, where `exp(-x^2/2)` alone would underflow.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Oscillator level / photon number `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OscillatorIndex(usize);

impl OscillatorIndex {
    pub fn new(n: i64) -> Result<Self> {
        usize::try_from(n)
            .map(OscillatorIndex)
            .map_err(|_| Error::NegativeIndex(n))
    }

    pub const fn get(self) -> usize {
        self.0
    }
}

impl From<usize> for OscillatorIndex {
    fn from(n: usize) -> Self {
        OscillatorIndex(n)
    }
}

/// `pi^(-1/4)`: the value of `psi_0(0)`.
pub const PSI0_AT_ZERO: f64 = 0.751_125_544_464_942_5;

// Rescale the unnormalized recurrence by 2^-SCALE_BITS whenever it exceeds
// 2^SCALE_BITS. Powers of two keep the rescaling exact.
const SCALE_BITS: i32 = 800;
const SCALE_LIMIT: f64 = 6.668_014_432_879_854e240; // 2^800

/// State of the recurrence at level k: `psi_k = cur * 2^(scale*SCALE_BITS) * exp(-x^2/2)`.
struct Recurrence {
    x: f64,
    k: usize,
    prev: f64,
    cur: f64,
    scale: i32,
}

impl Recurrence {
    fn new(x: f64) -> Self {
        Recurrence {
            x,
            k: 0,
            prev: 0.0,
            cur: PSI0_AT_ZERO,
            scale: 0,
        }
    }

    fn step(&mut self) {
        let k = self.k as f64;
        let next = self.x * (2.0 / (k + 1.0)).sqrt() * self.cur - (k / (k + 1.0)).sqrt() * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        if self.cur.abs() > SCALE_LIMIT {
            self.cur /= SCALE_LIMIT;
            self.prev /= SCALE_LIMIT;
            self.scale += 1;
        }
    }

    fn attach(&self, poly: f64) -> f64 {
        attach_gaussian(poly, self.scale, self.x)
    }
}

fn attach_gaussian(poly: f64, scale: i32, x: f64) -> f64 {
    if poly == 0.0 {
        return 0.0;
    }
    let half_sq = 0.5 * x * x;
    if scale == 0 && half_sq < 700.0 {
        return poly * (-half_sq).exp();
    }
    let log_mag = poly.abs().ln() + f64::from(scale * SCALE_BITS) * LN_2 - half_sq;
    poly.signum() * log_mag.exp()
}

/// Evaluates `psi_n(x)`.
pub fn eval_psi(n: OscillatorIndex, x: f64) -> f64 {
    let mut rec = Recurrence::new(x);
    for _ in 0..n.get() {
        rec.step();
    }
    rec.attach(rec.cur)
}

/// `psi_0 .. psi_{n_max}` at every node of `grid`, one row per level.
///
/// Each entry is bit-identical to the matching [`eval_psi`] call.
pub fn eval_psi_batch(n_max: OscillatorIndex, grid: &GridSpec) -> DMatrix<f64> {
    let rows = n_max.get() + 1;
    let mut out = DMatrix::zeros(rows, grid.node_count());
    for (j, &x) in grid.nodes().iter().enumerate() {
        let mut rec = Recurrence::new(x);
        out[(0, j)] = rec.attach(rec.cur);
        for n in 1..rows {
            rec.step();
            out[(n, j)] = rec.attach(rec.cur);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    GaussHermite,
    Uniform,
}

/// Nodes and integration weights on the real line.
///
/// Weights always integrate plain functions: `sum w_i f(x_i) ~ int f(x) dx`.
/// For Gauss-Hermite grids the classical weights have been divided by
/// `exp(-x_i^2)`, so the rule is exact for Gaussian-times-polynomial
/// integrands such as `psi_m psi_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    kind: GridKind,
    extent: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GridSpec {
    /// Builds a grid from explicit nodes and weights, checking the invariants.
    pub fn from_parts(kind: GridKind, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::GridTooSmall(nodes.len()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("non-finite node".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("nodes not strictly increasing".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGrid("weights must be finite and positive".into()));
        }
        let extent = nodes[0].abs().max(nodes[nodes.len() - 1].abs());
        Ok(GridSpec {
            kind,
            extent,
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Largest `|x|` covered by the grid.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Half-width that covers the classically allowed region of `psi_{n_max}`
/// plus a tail where it has decayed below ~1e-10.
pub fn covering_extent(n_max: OscillatorIndex) -> f64 {
    turning_point(n_max) + 5.0
}

/// Classical turning point `sqrt(2n+1)` of level n.
pub fn turning_point(n: OscillatorIndex) -> f64 {
    (2.0 * n.get() as f64 + 1.0).sqrt()
}

/// Builds a quadrature grid.
///
/// Uniform grids span `[-e, e]` with `e = max(extent_hint, sqrt(2 n_max + 1) + 5)`
/// and trapezoid weights. Gauss-Hermite grids ignore the hint and `n_max`.
pub fn make_grid(
    kind: GridKind,
    node_count: usize,
    extent_hint: Option<f64>,
    n_max: OscillatorIndex,
) -> Result<GridSpec> {
    if node_count < 2 {
        return Err(Error::GridTooSmall(node_count));
    }
    match kind {
        GridKind::Uniform => {
            let extent = extent_hint.unwrap_or(0.0).max(covering_extent(n_max));
            let span = (node_count - 1) as f64;
            let nodes = (0..node_count)
                .map(|i| extent * ((2 * i) as f64 - span) / span)
                .collect();
            let h = 2.0 * extent / span;
            let mut weights = vec![h; node_count];
            weights[0] = 0.5 * h;
            weights[node_count - 1] = 0.5 * h;
            GridSpec::from_parts(kind, nodes, weights)
        }
        GridKind::GaussHermite => {
            let (nodes, weights) = gauss_hermite(node_count);
            GridSpec::from_parts(kind, nodes, weights)
        }
    }
}

/// Gauss-Hermite nodes (ascending) and weights scaled by `exp(x_i^2)`.
///
/// Starting guesses follow the usual asymptotic formulas for the largest
/// zeros and extrapolate inward; each root is polished by Newton iteration
/// on `psi_n`, whose derivative is `sqrt(2n) psi_{n-1} - x psi_n`. The
/// scaled weight is `1 / (n psi_{n-1}(x_i)^2)`.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let sqrt_2n = (2.0 * nf).sqrt();
    let half = n.div_ceil(2);
    let mut roots = vec![0.0; half];
    let mut weights = vec![0.0; half];

    for i in 0..half {
        let mut z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => roots[0] - 1.14 * nf.powf(0.426) / roots[0],
            2 => 1.86 * roots[1] - 0.86 * roots[0],
            3 => 1.91 * roots[2] - 0.91 * roots[1],
            _ => 2.0 * roots[i - 1] - roots[i - 2],
        };
        let centre = n % 2 == 1 && i == half - 1;
        if centre {
            z = 0.0;
        }
        for _ in 0..100 {
            let (p_n, p_nm1) = top_pair(n, z);
            let dz = p_n / (sqrt_2n * p_nm1 - z * p_n);
            if centre {
                break;
            }
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let psi_nm1 = eval_psi(OscillatorIndex(n - 1), z);
        roots[i] = z;
        weights[i] = 1.0 / (nf * psi_nm1 * psi_nm1);
    }

    let mut nodes = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..half {
        nodes.push(-roots[i]);
        w.push(weights[i]);
    }
    let mirrored = if n % 2 == 1 { half - 1 } else { half };
    for i in (0..mirrored).rev() {
        nodes.push(roots[i]);
        w.push(weights[i]);
    }
    (nodes, w)
}

/// Unnormalized `(psi_n, psi_{n-1})` at x sharing one scale factor.
fn top_pair(n: usize, x: f64) -> (f64, f64) {
    let mut rec = Recurrence::new(x);
    for _ in 0..n {
        rec.step();
    }
    (rec.cur, rec.prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn idx(n: usize) -> OscillatorIndex {
        OscillatorIndex::from(n)
    }

    #[test]
    fn ground_state_at_origin() {
        assert_abs_diff_eq!(eval_psi(idx(0), 0.0), PI.powf(-0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(eval_psi(idx(0), 0.0), 0.7511255444, epsilon = 1e-10);
    }

    #[test]
    fn odd_level_vanishes_at_origin() {
        assert_eq!(eval_psi(idx(1), 0.0), 0.0);
    }

    #[test]
    fn matches_explicit_hermite_polynomial() {
        // H_3(x) = 8x^3 - 12x, normalization (2^3 3! sqrt(pi))^(-1/2).
        let x: f64 = 1.25;
        let h3 = 8.0 * x.powi(3) - 12.0 * x;
        let expected = (48.0 * PI.sqrt()).powf(-0.5) * (-x * x / 2.0).exp() * h3;
        assert_abs_diff_eq!(eval_psi(idx(3), x), expected, epsilon = 1e-12);
    }

    #[test]
    fn negative_index_rejected() {
        assert!(matches!(OscillatorIndex::new(-1), Err(Error::NegativeIndex(-1))));
        assert_eq!(OscillatorIndex::new(7).unwrap().get(), 7);
    }

    #[test]
    fn batch_is_bitwise_repeated_eval() {
        let grid = make_grid(GridKind::GaussHermite, 40, None, idx(0)).unwrap();
        let rows = eval_psi_batch(idx(30), &grid);
        for n in 0..=30 {
            for (j, &x) in grid.nodes().iter().enumerate() {
                assert_eq!(rows[(n, j)].to_bits(), eval_psi(idx(n), x).to_bits());
            }
        }
    }

    #[test]
    fn batch_single_row() {
        let grid = GridSpec::from_parts(GridKind::Uniform, vec![-1.0, 0.0, 1.0], vec![1.0; 3]).unwrap();
        let rows = eval_psi_batch(idx(0), &grid);
        assert_eq!(rows.nrows(), 1);
        assert_eq!(rows[(0, 1)], PSI0_AT_ZERO);
    }

    #[test]
    fn batch_column_at_origin() {
        let grid = make_grid(GridKind::Uniform, 5, None, idx(2)).unwrap();
        assert_eq!(grid.nodes()[2], 0.0);
        let rows = eval_psi_batch(idx(2), &grid);
        let c = PI.powf(-0.25);
        assert_abs_diff_eq!(rows[(0, 2)], c, epsilon = 1e-15);
        assert_abs_diff_eq!(rows[(1, 2)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rows[(2, 2)], -c / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn uniform_extent_rule() {
        let grid = make_grid(GridKind::Uniform, 201, None, idx(10)).unwrap();
        let e = 21f64.sqrt() + 5.0;
        assert_abs_diff_eq!(grid.extent(), e, epsilon = 1e-12);
        assert_abs_diff_eq!(grid.extent(), 9.58, epsilon = 5e-3);
        assert_eq!(grid.nodes()[0], -grid.nodes()[200]);
        // A larger hint wins.
        let wide = make_grid(GridKind::Uniform, 11, Some(20.0), idx(10)).unwrap();
        assert_eq!(wide.extent(), 20.0);
    }

    #[test]
    fn minimal_grids() {
        let g = make_grid(GridKind::Uniform, 2, None, idx(0)).unwrap();
        assert_eq!(g.node_count(), 2);
        let gh = make_grid(GridKind::GaussHermite, 2, None, idx(0)).unwrap();
        assert_abs_diff_eq!(gh.nodes()[1], 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(
            make_grid(GridKind::Uniform, 1, None, idx(0)),
            Err(Error::GridTooSmall(1))
        ));
        assert!(matches!(
            make_grid(GridKind::GaussHermite, 0, None, idx(0)),
            Err(Error::GridTooSmall(0))
        ));
    }

    #[test]
    fn from_parts_rejects_bad_grids() {
        assert!(GridSpec::from_parts(GridKind::Uniform, vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(GridSpec::from_parts(GridKind::Uniform, vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(GridSpec::from_parts(GridKind::Uniform, vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn gauss_hermite_normalizes_level_twenty() {
        let grid = make_grid(GridKind::GaussHermite, 64, None, idx(20)).unwrap();
        let norm = grid.integrate(|x| eval_psi(idx(20), x).powi(2));
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn gauss_hermite_integrates_gaussian_moments() {
        for n in [3, 10, 57, 128, 300, 800] {
            let grid = make_grid(GridKind::GaussHermite, n, None, idx(0)).unwrap();
            assert_eq!(grid.node_count(), n);
            let m0 = grid.integrate(|x| (-x * x).exp());
            assert_abs_diff_eq!(m0, PI.sqrt(), epsilon = 1e-11);
            let m2 = grid.integrate(|x| x * x * (-x * x).exp());
            assert_abs_diff_eq!(m2, PI.sqrt() / 2.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn orthonormal_through_level_fifty() {
        let grid = make_grid(GridKind::GaussHermite, 110, None, idx(0)).unwrap();
        let rows = eval_psi_batch(idx(50), &grid);
        let w = grid.weights();
        let mut worst: f64 = 0.0;
        for m in 0..=50 {
            for n in 0..=50 {
                let s: f64 = (0..grid.node_count()).map(|i| w[i] * rows[(m, i)] * rows[(n, i)]).sum();
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        assert!(worst < 1e-10, "max Gram deviation {worst:e}");
    }

    #[test]
    fn parity() {
        for n in 0..=40 {
            for &x in &[0.1, 0.7, 1.3, 2.9, 5.5, 8.0] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = eval_psi(idx(n), -x);
                let rhs = sign * eval_psi(idx(n), x);
                assert!((lhs - rhs).abs() <= 1e-14, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn satisfies_oscillator_equation() {
        let grid = make_grid(GridKind::Uniform, 2001, None, idx(10)).unwrap();
        let h = grid.nodes()[1] - grid.nodes()[0];
        for n in 0..=10 {
            let e = n as f64 + 0.5;
            let tol = h * h * (2.0 * n as f64 + 2.0).powi(2);
            for &x in &grid.nodes()[1..grid.node_count() - 1] {
                let f = |t: f64| eval_psi(idx(n), t);
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let lhs = 0.5 * (-d2 + x * x * f(x));
                assert!((lhs - e * f(x)).abs() < tol, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn bounded_up_to_level_two_hundred() {
        let xs: Vec<f64> = (-3000..=3000).map(|i| i as f64 * 0.01).collect();
        for &x in &xs {
            let mut rec = Recurrence::new(x);
            for _ in 0..200 {
                rec.step();
                let v = rec.attach(rec.cur);
                assert!(v.is_finite() && v.abs() <= 1.0 + 1e-12, "x={x}");
            }
        }
    }

    #[test]
    fn deep_tail_stays_finite() {
        // exp(-x^2/2) alone underflows here; the scaled recurrence must not.
        let v = eval_psi(idx(900), 40.0);
        assert!(v.is_finite() && v != 0.0);
        assert!(v.abs() < 1.0);
    }
}
